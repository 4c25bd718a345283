#pragma once

#include "ckp/linalg.hpp"
#include "ckp/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace ckp {

// Extended bound: finite rational or an explicit infinity tag.
struct Bound {
    enum class Kind { Finite, NegInf, PosInf };
    Kind kind = Kind::Finite;
    Rat value;

    static Bound at(Rat v) { return Bound{Kind::Finite, std::move(v)}; }
    static Bound at_int(const Int& v) { return Bound{Kind::Finite, Rat(v)}; }
    static Bound neg_inf() { return Bound{Kind::NegInf, Rat()}; }
    static Bound pos_inf() { return Bound{Kind::PosInf, Rat()}; }

    bool finite() const { return kind == Kind::Finite; }
    bool operator==(const Bound& o) const {
        return kind == o.kind && (kind != Kind::Finite || value == o.value);
    }
};

struct Row {
    IntVec coeffs;
    Bound lo, hi;
};

// A system { x in R^n | lo_i <= row_i . x <= hi_i, box_lo <= x <= box_hi }.
// Default box is the unit box [0,1]^n.
struct LinearSystem {
    int n = 0;
    std::vector<Row> rows;
    std::vector<std::pair<Bound, Bound>> box;

    LinearSystem() = default;
    explicit LinearSystem(int n_) : n(n_), box(static_cast<size_t>(n_), {Bound::at(0), Bound::at(1)}) {
        if (n_ < 0) throw std::invalid_argument("LinearSystem: negative dimension");
    }

    void check_bounds(const Bound& lo, const Bound& hi) const {
        if (lo.kind == Bound::Kind::PosInf || hi.kind == Bound::Kind::NegInf)
            throw std::invalid_argument("bounds: lo=+inf or hi=-inf");
        if (lo.finite() && hi.finite() && lo.value > hi.value)
            throw std::invalid_argument("bounds: lo > hi");
    }

    void add_row(IntVec coeffs, Bound lo, Bound hi) {
        if (static_cast<int>(coeffs.size()) != n)
            throw std::invalid_argument("add_row: coefficient length mismatch");
        check_bounds(lo, hi);
        rows.push_back(Row{std::move(coeffs), std::move(lo), std::move(hi)});
    }

    void add_eq(IntVec coeffs, const Rat& v) { add_row(std::move(coeffs), Bound::at(v), Bound::at(v)); }
    void add_le(IntVec coeffs, const Rat& v) { add_row(std::move(coeffs), Bound::neg_inf(), Bound::at(v)); }
    void add_ge(IntVec coeffs, const Rat& v) { add_row(std::move(coeffs), Bound::at(v), Bound::pos_inf()); }

    void set_box(int j, Bound lo, Bound hi) {
        check_bounds(lo, hi);
        box.at(static_cast<size_t>(j)) = {std::move(lo), std::move(hi)};
    }

    bool contains(const RatVec& x) const {
        if (static_cast<int>(x.size()) != n) return false;
        for (int j = 0; j < n; ++j) {
            const auto& [lo, hi] = box[static_cast<size_t>(j)];
            if (lo.finite() && x[static_cast<size_t>(j)] < lo.value) return false;
            if (hi.finite() && x[static_cast<size_t>(j)] > hi.value) return false;
        }
        for (const Row& r : rows) {
            Rat s = dot(r.coeffs, x);
            if (r.lo.finite() && s < r.lo.value) return false;
            if (r.hi.finite() && s > r.hi.value) return false;
        }
        return true;
    }
};

}  // namespace ckp
