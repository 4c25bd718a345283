#pragma once

#include "ckp/instance.hpp"
#include "ckp/linalg.hpp"

namespace ckp::testing {

// The four bundled instances, coefficients transcribed verbatim.
inline IntVec p1_vec() { return to_int_vec({1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3}); }
inline IntVec p2_vec() { return to_int_vec({1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3, 4}); }
inline IntVec p3_vec() { return to_int_vec({5, 3, 1, 2, 4, 2, 3, 5, 3, 4, 2, 1}); }
inline IntVec r_vec() { return to_int_vec({-1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 0, 1}); }

inline KnapsackInstance kp(const IntVec& a, long beta, CascadeStructure s) {
    KnapsackInstance inst;
    inst.n = static_cast<int>(a.size());
    inst.a = a;
    inst.beta_lo = beta;
    inst.beta_hi = beta;
    inst.provenance = Provenance{std::move(s), std::nullopt};
    return inst;
}

inline KnapsackInstance kp1() {
    CascadeStructure s;
    s.p = {p1_vec(), p2_vec()};
    s.r = r_vec();
    s.M = {66, 10};
    s.k = {12, 16};
    s.targets = {1};
    return kp(to_int_vec({75, 86, 97, 105, 142, 153, 161, 172, 209, 217, 228, 239}), 1023, s);
}

inline KnapsackInstance kp2() {
    CascadeStructure s;
    s.p = {p1_vec(), p2_vec()};
    s.r = r_vec();
    s.M = {62, 10};
    s.k = {12, 16};
    s.targets = {2};
    return kp(to_int_vec({71, 82, 93, 101, 134, 145, 153, 164, 197, 205, 216, 227}), 981, s);
}

inline KnapsackInstance kp3() {
    CascadeStructure s;
    s.p = {p1_vec(), p2_vec()};
    s.r = r_vec();
    s.M = {48, 10};
    s.k = {12, 16};
    s.targets = {3};
    return kp(to_int_vec({57, 68, 79, 87, 106, 117, 125, 136, 155, 163, 174, 185}), 847, s);
}

inline KnapsackInstance kp4() {
    CascadeStructure s;
    s.p = {p1_vec(), p2_vec(), p3_vec()};
    s.r = r_vec();
    s.M = {572, 97, 11};
    s.k = {12, 16, 19};
    s.targets = {2, 2};
    return kp(to_int_vec({723, 799, 875, 981, 1285, 1361, 1467, 1587, 1847, 1953, 2029, 2116}), 9312,
              s);
}

}  // namespace ckp::testing
