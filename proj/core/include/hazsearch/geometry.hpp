#pragma once

#include <algorithm>
#include <cmath>

namespace hazsearch {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 lerp(Vec2 a, Vec2 b, double t) {
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

// Axis-aligned rectangle given by opposite corners (lo <= hi per axis).
struct Rect {
    Vec2 lo;
    Vec2 hi;

    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }

    Rect expanded(double margin) const {
        return {{lo.x - margin, lo.y - margin}, {hi.x + margin, hi.y + margin}};
    }
};

// Euclidean distance from a point to a rectangle (0 inside).
inline double rect_distance(Vec2 p, const Rect& r) {
    const double dx = std::max({r.lo.x - p.x, 0.0, p.x - r.hi.x});
    const double dy = std::max({r.lo.y - p.y, 0.0, p.y - r.hi.y});
    return std::hypot(dx, dy);
}

} // namespace hazsearch
