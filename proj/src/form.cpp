#include "fedq/form.hpp"

#include <bit>

#include "fedq/error.hpp"

namespace fedq {

DifferentialForm::DifferentialForm(const ChartSpec &chart, int degree) : chart_(chart), degree_(degree)
{
	if (degree < 0)
		fail(errc::domain, "negative form degree");
}

DifferentialForm DifferentialForm::from_function(const ChartFunction &f)
{
	DifferentialForm r(f.chart(), 0);
	r.add_term(0, f);
	return r;
}

DifferentialForm DifferentialForm::monomial(const ChartFunction &c, const std::vector<int> &idx)
{
	DifferentialForm r(c.chart(), static_cast<int>(idx.size()));
	std::uint8_t mask = 0;
	int inversions = 0;
	for (size_t a = 0; a < idx.size(); ++a) {
		int i = idx[a];
		if (i < 0 || i >= c.chart().dim())
			fail(errc::domain, "form index out of range");
		if (mask & (1u << i))
			return r; // repeated index: zero
		for (size_t b = 0; b < a; ++b)
			if (idx[b] > i)
				++inversions;
		mask |= static_cast<std::uint8_t>(1u << i);
	}
	r.add_term(mask, inversions % 2 == 0 ? c : -c);
	return r;
}

ChartFunction DifferentialForm::component(std::uint8_t mask) const
{
	auto it = comps_.find(mask);
	return it == comps_.end() ? ChartFunction(chart_) : it->second;
}

void DifferentialForm::add_term(std::uint8_t mask, const ChartFunction &c)
{
	if (c.is_zero())
		return;
	if (std::popcount(mask) != degree_)
		fail(errc::internal, "form component degree mismatch");
	auto [it, inserted] = comps_.try_emplace(mask, c);
	if (!inserted) {
		it->second += c;
		if (it->second.is_zero())
			comps_.erase(it);
	}
}

DifferentialForm DifferentialForm::operator-() const
{
	DifferentialForm r(chart_, degree_);
	for (const auto &t : comps_)
		r.comps_.emplace(t.first, -t.second);
	return r;
}

DifferentialForm &DifferentialForm::operator+=(const DifferentialForm &o)
{
	if (comps_.empty() && o.comps_.empty())
		return *this;
	if (comps_.empty()) {
		*this = o;
		return *this;
	}
	if (o.comps_.empty())
		return *this;
	check_chart(chart_, o.chart_, "form +");
	if (degree_ != o.degree_)
		fail(errc::mismatch, "adding forms of different degree");
	for (const auto &t : o.comps_)
		add_term(t.first, t.second);
	return *this;
}

DifferentialForm &DifferentialForm::operator-=(const DifferentialForm &o) { return *this += -o; }

bool operator==(const DifferentialForm &a, const DifferentialForm &b)
{
	if (a.comps_.empty() && b.comps_.empty())
		return true;
	return a.chart_ == b.chart_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
}

DifferentialForm DifferentialForm::scaled(const ChartFunction &f) const
{
	DifferentialForm r(chart_, degree_);
	for (const auto &t : comps_)
		r.add_term(t.first, t.second * f);
	return r;
}

DifferentialForm DifferentialForm::scaled(const Rat &q) const
{
	DifferentialForm r(chart_, degree_);
	for (const auto &t : comps_)
		r.add_term(t.first, t.second.scaled(q));
	return r;
}

DifferentialForm DifferentialForm::scaled(const Scalar &s) const
{
	DifferentialForm r(chart_, degree_);
	for (const auto &t : comps_)
		r.add_term(t.first, t.second.scaled(s));
	return r;
}

DifferentialForm DifferentialForm::jet_derivative(int gen) const
{
	DifferentialForm r(chart_, degree_);
	for (const auto &t : comps_)
		r.add_term(t.first, t.second.jet_derivative(gen));
	return r;
}

DifferentialForm DifferentialForm::jet_at_zero(int gen) const
{
	DifferentialForm r(chart_, degree_);
	for (const auto &t : comps_)
		r.add_term(t.first, t.second.jet_at_zero(gen));
	return r;
}

DifferentialForm DifferentialForm::jet_truncated(int gen, int max_order) const
{
	DifferentialForm r(chart_, degree_);
	for (const auto &t : comps_)
		r.add_term(t.first, t.second.jet_truncated(gen, max_order));
	return r;
}

std::string DifferentialForm::str() const
{
	if (comps_.empty())
		return "0";
	std::string out;
	for (const auto &t : comps_) {
		if (!out.empty())
			out += " + ";
		std::string basis;
		for (int i = 0; i < 8; ++i) {
			if (t.first & (1u << i)) {
				if (!basis.empty())
					basis += "^";
				basis += "dx" + std::to_string(i + 1);
			}
		}
		std::string c = t.second.str();
		bool compound = c.find(' ') != std::string::npos;
		if (basis.empty())
			out += c;
		else
			out += (compound ? "(" + c + ")" : c) + (c == "1" && !compound ? basis : "*" + basis);
	}
	return out;
}

int wedge_sign(std::uint8_t a, std::uint8_t b)
{
	if (a & b)
		return 0;
	int inv = 0;
	for (int j = 0; j < 8; ++j)
		if (b & (1u << j))
			inv += std::popcount(static_cast<unsigned>(a >> (j + 1)));
	return inv % 2 == 0 ? 1 : -1;
}

DifferentialForm wedge(const DifferentialForm &a, const DifferentialForm &b)
{
	check_chart(a.chart(), b.chart(), "wedge");
	DifferentialForm r(a.chart(), a.degree() + b.degree());
	if (r.degree() > a.chart().dim())
		return r; // beyond top degree: zero
	for (const auto &ta : a.components()) {
		for (const auto &tb : b.components()) {
			int sign = wedge_sign(ta.first, tb.first);
			if (sign == 0)
				continue;
			ChartFunction c = ta.second * tb.second;
			r.add_term(static_cast<std::uint8_t>(ta.first | tb.first), sign == 1 ? c : -c);
		}
	}
	return r;
}

DifferentialForm exterior_d(const DifferentialForm &a)
{
	DifferentialForm r(a.chart(), a.degree() + 1);
	if (r.degree() > a.chart().dim())
		return r;
	for (const auto &t : a.components()) {
		for (int i = 0; i < a.chart().dim(); ++i) {
			if (t.first & (1u << i))
				continue;
			ChartFunction dc = t.second.derivative(i);
			if (dc.is_zero())
				continue;
			int sign = wedge_sign(static_cast<std::uint8_t>(1u << i), t.first);
			r.add_term(static_cast<std::uint8_t>(t.first | (1u << i)), sign == 1 ? dc : -dc);
		}
	}
	return r;
}

DifferentialForm contract(const DifferentialForm &a, const std::vector<ChartFunction> &field)
{
	if (static_cast<int>(field.size()) != a.chart().dim())
		fail(errc::mismatch, "vector field dimension mismatch in contraction");
	if (a.degree() == 0)
		return DifferentialForm(a.chart(), 0);
	DifferentialForm r(a.chart(), a.degree() - 1);
	for (const auto &t : a.components()) {
		int below = 0;
		for (int j = 0; j < a.chart().dim(); ++j) {
			if (!(t.first & (1u << j)))
				continue;
			ChartFunction c = t.second * field[static_cast<size_t>(j)];
			if (!c.is_zero())
				r.add_term(static_cast<std::uint8_t>(t.first & ~(1u << j)), below % 2 == 0 ? c : -c);
			++below;
		}
	}
	return r;
}

PiScalar integrate_torus(const ChartFunction &f, const DifferentialForm &volume)
{
	if (f.chart().mode != ChartMode::torus)
		fail(errc::unsupported, "integration is available only on torus charts");
	check_chart(f.chart(), volume.chart(), "integrate");
	const int dim = f.chart().dim();
	if (volume.degree() != dim)
		fail(errc::domain, "integration requires a top-degree volume form");
	const std::uint8_t top = static_cast<std::uint8_t>((1u << dim) - 1);
	ChartFunction g = f * volume.component(top);
	return PiScalar(g.constant_coefficient(), dim);
}

DifferentialForm standard_symplectic_form(const ChartSpec &chart)
{
	DifferentialForm w(chart, 2);
	ChartFunction one(chart, Scalar(Rat(1)));
	for (int i = 0; i < chart.m; ++i)
		w += DifferentialForm::monomial(one, {i, i + chart.m});
	return w;
}

int omega_entry(const ChartSpec &chart, int i, int j)
{
	if (i < chart.m && j == i + chart.m)
		return 1;
	if (j < chart.m && i == j + chart.m)
		return -1;
	return 0;
}

int lambda_entry(const ChartSpec &chart, int i, int j)
{
	// Lambda = omega^{-1}: Lambda^{ij} omega_{jk} = delta^i_k.
	if (i < chart.m && j == i + chart.m)
		return -1;
	if (j < chart.m && i == j + chart.m)
		return 1;
	return 0;
}

DifferentialForm liouville_volume(const ChartSpec &chart)
{
	DifferentialForm w = standard_symplectic_form(chart);
	DifferentialForm r = w;
	Rat factorial = 1;
	for (int i = 2; i <= chart.m; ++i) {
		r = wedge(r, w);
		factorial *= i;
	}
	return r.scaled(1 / factorial);
}

ChartFunction poisson_bracket(const ChartFunction &f, const ChartFunction &g)
{
	check_chart(f.chart(), g.chart(), "poisson bracket");
	const ChartSpec &chart = f.chart();
	ChartFunction r(chart);
	for (int i = 0; i < chart.dim(); ++i) {
		for (int j = 0; j < chart.dim(); ++j) {
			int lam = lambda_entry(chart, i, j);
			if (lam == 0)
				continue;
			ChartFunction term = f.derivative(i) * g.derivative(j);
			r += lam == 1 ? term : -term;
		}
	}
	return r;
}

} // namespace fedq
