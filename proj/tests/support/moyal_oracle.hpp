#pragma once

#include <array>
#include <vector>

#include "fedq/form.hpp"
#include "fedq/series.hpp"

namespace fedq::testing {

// Independent direct Moyal product: sum_k (nu/2)^k / k! Lambda^{i1 j1} ...
// Lambda^{ik jk} d_{i1..ik} F d_{j1..jk} G, evaluated by brute-force index
// tuples. Deliberately avoids the Weyl-bundle machinery.
inline NuSeries<ChartFunction> moyal_star(const ChartFunction &f, const ChartFunction &g, int cap)
{
	const ChartSpec chart = f.chart();
	const int d = chart.dim();
	NuSeries<ChartFunction> out(cap);
	Rat factor = 1; // 1 / (k! 2^k)
	for (int k = 0; k <= cap; ++k) {
		if (k > 0)
			factor /= 2 * k;
		ChartFunction term(chart);
		// odometer over (i1..ik, j1..jk)
		std::vector<int> idx(static_cast<size_t>(2 * k), 0);
		while (true) {
			int lam = 1;
			for (int a = 0; a < k && lam != 0; ++a)
				lam *= lambda_entry(chart, idx[static_cast<size_t>(a)], idx[static_cast<size_t>(k + a)]);
			if (lam != 0) {
				ChartFunction df = f, dg = g;
				for (int a = 0; a < k; ++a) {
					df = df.derivative(idx[static_cast<size_t>(a)]);
					dg = dg.derivative(idx[static_cast<size_t>(k + a)]);
				}
				ChartFunction p = df * dg;
				term += lam == 1 ? p : -p;
			}
			int pos = 0;
			for (; pos < 2 * k; ++pos) {
				if (++idx[static_cast<size_t>(pos)] < d)
					break;
				idx[static_cast<size_t>(pos)] = 0;
			}
			if (pos == 2 * k)
				break;
		}
		out.set(k, term.scaled(factor));
	}
	return out;
}

inline NuSeries<ChartFunction> moyal_commutator(const ChartFunction &f, const ChartFunction &g, int cap)
{
	return moyal_star(f, g, cap) - moyal_star(g, f, cap);
}

// Exact torus translation x_i -> x_i + c where (cos c, sin c) is a rational
// point on the circle; multiples of c are expanded by the angle-addition
// recurrence so everything stays rational.
inline ChartFunction shift_coordinate(const ChartFunction &f, int coord, const Rat &cos_c, const Rat &sin_c)
{
	const ChartSpec chart = f.chart();
	ChartFunction out(chart);
	for (const auto &t : f.terms()) {
		if (t.first.is_constant()) {
			out.add_term(t.first, t.second);
			continue;
		}
		std::array<int, kMaxDim> freq{};
		for (int i = 0; i < chart.dim(); ++i)
			freq[static_cast<size_t>(i)] = t.first.freq(i);
		int k = freq[static_cast<size_t>(coord)];
		// cos(k c), sin(k c) by the addition formulas (k may be negative)
		Rat ck = 1, sk = 0;
		int steps = k >= 0 ? k : -k;
		for (int s = 0; s < steps; ++s) {
			Rat c2 = ck * cos_c - sk * sin_c;
			Rat s2 = sk * cos_c + ck * sin_c;
			ck = c2;
			sk = s2;
		}
		if (k < 0)
			sk = -sk;
		ChartFunction base_cos = ChartFunction::trig(chart, false, freq);
		ChartFunction base_sin = ChartFunction::trig(chart, true, freq);
		ChartFunction moved = t.first.is_sin() ? base_sin.scaled(ck) + base_cos.scaled(sk)
		                                       : base_cos.scaled(ck) - base_sin.scaled(sk);
		out += moved.scaled(t.second);
	}
	return out;
}

} // namespace fedq::testing
