#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace ckp {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline bool is_integer(const Rat& x) { return den(x) == 1; }

// Floor/ceil toward the usual integer lattice.
inline Int floor_int(const Rat& x) {
    Int q = num(x) / den(x);  // truncates toward zero
    if (q * den(x) != num(x) && num(x) < 0) --q;
    return q;
}

inline Int ceil_int(const Rat& x) {
    Int q = num(x) / den(x);
    if (q * den(x) != num(x) && num(x) > 0) ++q;
    return q;
}

// Strict floor/ceiling: step past exact integers.
// ifloor(x) = floor(x) if x not integral, else x-1; equivalently floor(x)+? -- note ifloor(x) = ceil(x)-1.
inline Int ifloor(const Rat& x) { return is_integer(x) ? Int(num(x) - 1) : floor_int(x); }
inline Int iceil(const Rat& x) { return is_integer(x) ? Int(num(x) + 1) : ceil_int(x); }

// Nearest integer with halves rounded down: ceil(x - 1/2).
inline Int round_half_down(const Rat& x) {
    Rat shifted(2 * num(x) - den(x), 2 * den(x));
    return ceil_int(shifted);
}

// Fixed-point decimal display, rounding half away from zero. Display only;
// never feed the result back into computation.
inline std::string display_fixed(const Rat& x, int digits) {
    if (digits < 0) throw std::invalid_argument("display_fixed: negative digit count");
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Int p = num(x) < 0 ? Int(-num(x)) : num(x);
    Int q = den(x);
    Int scaled = (2 * p * scale + q) / (2 * q);  // floor(|x|*scale + 1/2)
    Int whole = scaled / scale;
    Int frac = scaled % scale;
    std::string s = whole.str();
    if (digits > 0) {
        std::string f = frac.str();
        s += "." + std::string(static_cast<size_t>(digits) - f.size(), '0') + f;
    }
    if (num(x) < 0 && scaled != 0) s = "-" + s;
    return s;
}

// Integer square root bounds (exact, for norm comparisons that need one sqrt).
inline Int isqrt_floor(const Int& v) {
    if (v < 0) throw std::invalid_argument("isqrt of negative value");
    return boost::multiprecision::sqrt(v);
}

inline Int isqrt_ceil(const Int& v) {
    Int s = isqrt_floor(v);
    if (s * s < v) ++s;
    return s;
}

inline Int pow2_int(unsigned e) {
    Int r = 1;
    return r << e;
}

}  // namespace ckp
