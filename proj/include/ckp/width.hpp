#pragma once

#include "ckp/simplex.hpp"

#include <optional>
#include <stdexcept>

namespace ckp {

struct WidthReport {
    IntVec direction;
    Rat max, min;
    Rat width;   // max - min
    Int iwidth;  // floor(max) - ceil(min) + 1, clamped at 0
};

// Width of Q along an integer direction; nullopt when Q is empty.
inline std::optional<WidthReport> width_along(const IntVec& direction, const LinearSystem& q) {
    OptResult mx = lp_optimize(direction, Sense::Max, q);
    if (mx.status == LpStatus::Infeasible) return std::nullopt;
    OptResult mn = lp_optimize(direction, Sense::Min, q);
    if (mx.status == LpStatus::Unbounded || mn.status == LpStatus::Unbounded)
        throw std::invalid_argument("width: polyhedron unbounded along direction");
    WidthReport r;
    r.direction = direction;
    r.max = mx.value;
    r.min = mn.value;
    r.width = mx.value - mn.value;
    Int iw = floor_int(r.max) - ceil_int(r.min) + 1;
    r.iwidth = iw < 0 ? Int(0) : iw;
    return r;
}

inline std::optional<Int> iwidth_along(const IntVec& direction, const LinearSystem& q) {
    auto r = width_along(direction, q);
    if (!r) return std::nullopt;
    return r->iwidth;
}

// Width figure as the difference of the two rounded displays, matching how a
// range table reads when max and min are printed rounded. Exact arithmetic on
// scaled units; the exact rational width stays available in the report.
inline std::string display_width_of_bounds(const WidthReport& r, int digits) {
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    auto units = [&](const Rat& x) {
        Int p = num(x) < 0 ? Int(-num(x)) : num(x);
        Int u = (2 * p * scale + den(x)) / (2 * den(x));
        return num(x) < 0 ? Int(-u) : u;
    };
    return display_fixed(Rat(units(r.max) - units(r.min), scale), digits);
}

}  // namespace ckp
