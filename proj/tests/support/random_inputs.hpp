#pragma once

#include <random>

#include "fedq/chart.hpp"
#include "fedq/form.hpp"

namespace fedq::testing {

// Deterministic generator of small trig polynomials for property tests.
class RandomChart {
  public:
	RandomChart(ChartSpec chart, unsigned seed, const JetRing *ring = nullptr)
	    : chart_(chart), rng_(seed), ring_(ring)
	{
	}

	Rat coefficient()
	{
		static const int nums[] = {1, -1, 2, -2, 1, -1, 3, 1};
		static const int dens[] = {1, 2, 1, 3, 1, 1, 2, 4};
		int i = pick(8);
		return rat(nums[i], dens[i]);
	}

	ChartFunction function(int max_terms = 3, int max_freq = 2)
	{
		ChartFunction f(chart_);
		int terms = 1 + pick(max_terms);
		for (int t = 0; t < terms; ++t) {
			std::array<int, kMaxDim> freq{};
			for (int i = 0; i < chart_.dim(); ++i)
				freq[static_cast<size_t>(i)] = pick(2 * max_freq + 1) - max_freq;
			bool is_sin = pick(2) == 1;
			f += ChartFunction::trig(chart_, is_sin, freq).scaled(coefficient());
		}
		return f;
	}

	// Nilpotent-coefficient function (each term carries a generator factor).
	ChartFunction nilpotent_function(int gen, int max_terms = 2)
	{
		Scalar g = Scalar::generator(ring_, gen);
		return function(max_terms, 1).scaled(g);
	}

	int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

  private:
	ChartSpec chart_;
	std::mt19937 rng_;
	const JetRing *ring_;
};

} // namespace fedq::testing
