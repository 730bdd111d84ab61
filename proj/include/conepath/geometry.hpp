#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "conepath/errors.hpp"

namespace conepath {

struct Interval {
    double a = 0.0;
    double b = 0.0;

    double width() const noexcept { return b - a; }
    bool contains(double x) const noexcept { return a <= x && x <= b; }
    bool interior(double x) const noexcept { return a < x && x < b; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Ordered, disjoint closed intervals on the x-axis.
class SupportRegion {
public:
    SupportRegion() = default;

    SupportRegion(std::initializer_list<Interval> parts) : SupportRegion(std::vector<Interval>(parts)) {}

    explicit SupportRegion(std::vector<Interval> parts) {
        for (const auto& iv : parts) {
            if (!std::isfinite(iv.a) || !std::isfinite(iv.b) || iv.a > iv.b)
                throw DomainError("support interval must satisfy a <= b with finite endpoints");
        }
        std::sort(parts.begin(), parts.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
        intervals_ = merge(std::move(parts));
    }

    static SupportRegion empty() { return {}; }

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    bool is_empty() const noexcept { return intervals_.empty(); }
    std::size_t size() const noexcept { return intervals_.size(); }

    // Total length.
    double measure() const noexcept {
        double s = 0.0;
        for (const auto& iv : intervals_) s += iv.width();
        return s;
    }

    bool contains(double x) const noexcept {
        return std::any_of(intervals_.begin(), intervals_.end(), [x](const Interval& iv) { return iv.contains(x); });
    }

    // Minimal interval containing the whole region.
    Interval hull() const {
        if (intervals_.empty()) throw DomainError("hull of an empty support region");
        return {intervals_.front().a, intervals_.back().b};
    }

    // Internal gaps (b_i, a_{i+1}).
    std::vector<Interval> gaps() const {
        std::vector<Interval> g;
        for (std::size_t i = 0; i + 1 < intervals_.size(); ++i)
            g.push_back({intervals_[i].b, intervals_[i + 1].a});
        return g;
    }

    bool subset_of(const SupportRegion& other, double tol = 0.0) const {
        return std::all_of(intervals_.begin(), intervals_.end(), [&](const Interval& iv) {
            return std::any_of(other.intervals_.begin(), other.intervals_.end(), [&](const Interval& o) {
                return o.a <= iv.a + tol && iv.b <= o.b + tol;
            });
        });
    }

    friend bool operator==(const SupportRegion&, const SupportRegion&) = default;

    std::string to_string() const {
        std::ostringstream os;
        os.precision(17);
        os << '{';
        for (std::size_t i = 0; i < intervals_.size(); ++i) {
            if (i) os << ',';
            os << '[' << intervals_[i].a << ',' << intervals_[i].b << ']';
        }
        os << '}';
        return os.str();
    }

private:
    static std::vector<Interval> merge(std::vector<Interval> sorted) {
        std::vector<Interval> out;
        for (const auto& iv : sorted) {
            if (!out.empty()) {
                const double scale = std::max({1.0, std::abs(out.back().b), std::abs(iv.a)});
                if (iv.a <= out.back().b + 1e-12 * scale) {
                    out.back().b = std::max(out.back().b, iv.b);
                    continue;
                }
            }
            out.push_back(iv);
        }
        return out;
    }

    std::vector<Interval> intervals_;
};

inline std::ostream& operator<<(std::ostream& os, const SupportRegion& s) { return os << s.to_string(); }

// Widen every interval by r on both sides and merge overlaps.
inline SupportRegion dilate(const SupportRegion& s, double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("dilation radius must be finite and >= 0");
    std::vector<Interval> parts;
    parts.reserve(s.size());
    for (const auto& iv : s.intervals()) parts.push_back({iv.a - r, iv.b + r});
    return SupportRegion(std::move(parts));
}

// Space-time triangle over a gap (a, b) of the initial support, with vertices
// (a, 0), (b, 0) and ((a + b)/2, (b - a)/(2c)). The wave function vanishes in it.
struct ExclusionTriangle {
    double a = 0.0;
    double b = 0.0;
    double apex_t = 0.0;

    double apex_x() const noexcept { return 0.5 * (a + b); }

    // Strict interior of the triangle for speed c.
    bool contains(double x, double t, double c) const noexcept {
        return t >= 0.0 && t < apex_t && x > a + c * t && x < b - c * t;
    }
};

inline std::vector<ExclusionTriangle> triangles_from_gaps(const SupportRegion& s, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("speed of light must be finite and > 0");
    std::vector<ExclusionTriangle> out;
    for (const auto& g : s.gaps()) out.push_back({g.a, g.b, (g.b - g.a) / (2.0 * c)});
    return out;
}

// Light cone emanating from an initial support.
class LightConeGeometry {
public:
    LightConeGeometry(SupportRegion initial, double c)
        : initial_(std::move(initial)), c_(c), triangles_(triangles_from_gaps(initial_, c)) {
        if (initial_.is_empty()) throw DomainError("light cone of an empty support");
    }

    const SupportRegion& initial() const noexcept { return initial_; }
    double c() const noexcept { return c_; }
    const std::vector<ExclusionTriangle>& triangles() const noexcept { return triangles_; }
    Interval hull() const { return initial_.hull(); }

    // Time after which the active region is a single interval.
    double last_apex() const noexcept {
        double t = 0.0;
        for (const auto& tr : triangles_) t = std::max(t, tr.apex_t);
        return t;
    }

    SupportRegion active_region(double t) const {
        if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
        return dilate(initial_, c_ * t);
    }

    bool inside(double x, double t) const { return active_region(t).contains(x); }

private:
    SupportRegion initial_;
    double c_;
    std::vector<ExclusionTriangle> triangles_;
};

inline SupportRegion active_region(const LightConeGeometry& g, double t) { return g.active_region(t); }

// One CSV row per snapshot: t followed by a;b pairs of the active intervals.
inline void write_geometry_csv(std::ostream& os, const LightConeGeometry& g, const std::vector<double>& times) {
    os.precision(17);
    os << "t,n_intervals,intervals\n";
    for (double t : times) {
        const auto r = g.active_region(t);
        os << t << ',' << r.size() << ',';
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ' ';
            os << r.intervals()[i].a << ';' << r.intervals()[i].b;
        }
        os << '\n';
    }
}

} // namespace conepath
