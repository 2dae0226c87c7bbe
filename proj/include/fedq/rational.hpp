#pragma once

#include <gmpxx.h>
#include <string>

#include "fedq/error.hpp"

namespace fedq {

// Exact rational scalar. mpq_class keeps values canonical (reduced, positive
// denominator) through arithmetic.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1)
{
	if (den == 0)
		fail(errc::domain, "rational with zero denominator");
	Rat q(num, den);
	q.canonicalize();
	return q;
}

inline bool is_zero(const Rat &q) { return sgn(q) == 0; }

// Canonical text form: "a" or "a/b" with b > 1.
inline std::string to_string(const Rat &q) { return q.get_str(); }

inline Rat rat_pow(const Rat &q, int e)
{
	if (e < 0)
		fail(errc::domain, "negative rational power");
	Rat r = 1;
	for (int i = 0; i < e; ++i)
		r *= q;
	return r;
}

} // namespace fedq
