#include "fedq/weyl.hpp"

#include <bit>

#include "fedq/error.hpp"

namespace fedq {

std::shared_ptr<const WeylContext> WeylContext::make(const ChartSpec &chart, int trunc_degree, int nu_order)
{
	if (trunc_degree < 2 * nu_order + 3)
		fail(errc::precondition, "weyl truncation degree must be at least 2N + 3");
	if (chart.dim() > kMaxDim)
		fail(errc::domain, "chart dimension exceeds the supported maximum");
	auto ctx = std::make_shared<WeylContext>();
	ctx->chart_ = chart;
	ctx->trunc_degree_ = trunc_degree;
	ctx->nu_order_ = nu_order;
	return ctx;
}

WeylKey WeylKey::make(int k, const std::array<int, kMaxDim> &ydeg, std::uint8_t mask, int dim)
{
	if (k < -64 || k > 63)
		fail(errc::domain, "nu power out of range");
	WeylKey key;
	key.bits = (std::uint64_t(static_cast<unsigned>(k + 64)) << 56) | (std::uint64_t(mask) << 48);
	for (int i = 0; i < dim; ++i) {
		int e = ydeg[static_cast<size_t>(i)];
		if (e < 0 || e > 255)
			fail(errc::domain, "y exponent out of range");
		key.bits |= std::uint64_t(static_cast<unsigned>(e)) << (8 * i);
	}
	return key;
}

int WeylKey::ytotal(int dim) const
{
	int t = 0;
	for (int i = 0; i < dim; ++i)
		t += ydeg(i);
	return t;
}

int WeylKey::form_degree() const { return std::popcount(static_cast<unsigned>(mask())); }

WeylElement WeylElement::unit(WeylContextPtr ctx)
{
	return from_function(ctx, ChartFunction(ctx->chart(), Scalar(Rat(1))));
}

WeylElement WeylElement::from_function(WeylContextPtr ctx, const ChartFunction &f, int nu_power)
{
	WeylElement a(ctx, nu_power < 0);
	if (!f.is_zero()) {
		check_chart(ctx->chart(), f.chart(), "weyl lift");
		a.add_term(WeylKey::make(nu_power, {}, 0, ctx->chart().dim()), f);
	}
	return a;
}

WeylElement WeylElement::from_series(WeylContextPtr ctx, const NuSeries<ChartFunction> &f)
{
	WeylElement a(ctx, f.floor() < 0);
	for (const auto &c : f.coefficients())
		a.add_term(WeylKey::make(c.first, {}, 0, ctx->chart().dim()), c.second);
	return a;
}

WeylElement WeylElement::from_form(WeylContextPtr ctx, const DifferentialForm &theta, int nu_power)
{
	WeylElement a(ctx, nu_power < 0);
	check_chart(ctx->chart(), theta.chart(), "weyl form lift");
	for (const auto &t : theta.components())
		a.add_term(WeylKey::make(nu_power, {}, t.first, ctx->chart().dim()), t.second);
	return a;
}

WeylElement WeylElement::y_monomial(WeylContextPtr ctx, const std::array<int, kMaxDim> &ydeg,
                                    const ChartFunction &coeff, int nu_power)
{
	WeylElement a(ctx, nu_power < 0);
	if (!coeff.is_zero())
		a.add_term(WeylKey::make(nu_power, ydeg, 0, ctx->chart().dim()), coeff);
	return a;
}

WeylElement WeylElement::as_extended() const
{
	WeylElement a = *this;
	a.extended_ = true;
	return a;
}

int WeylElement::min_total_degree() const
{
	int d = ctx_ ? ctx_->trunc_degree() + 1 : 0;
	for (const auto &t : terms_)
		d = std::min(d, t.first.total_degree(ctx_->chart().dim()));
	return d;
}

int WeylElement::max_form_degree() const
{
	int d = 0;
	for (const auto &t : terms_)
		d = std::max(d, t.first.form_degree());
	return d;
}

NuSeries<ChartFunction> WeylElement::y0_part() const
{
	const int dim = ctx_->chart().dim();
	int floor = 0;
	for (const auto &t : terms_)
		floor = std::min(floor, t.first.nu());
	NuSeries<ChartFunction> s(ctx_->trunc_degree(), floor);
	for (const auto &t : terms_)
		if (t.first.mask() == 0 && t.first.ytotal(dim) == 0)
			s.set(t.first.nu(), t.second);
	return s;
}

void WeylElement::add_term(const WeylKey &key, const ChartFunction &c)
{
	if (c.is_zero())
		return;
	const int dim = ctx_->chart().dim();
	const int deg = key.total_degree(dim);
	if (deg > ctx_->trunc_degree())
		return; // truncation ideal
	if (extended_) {
		if (deg < 0)
			fail(errc::internal, "W+ term with negative total degree");
	} else if (key.nu() < 0) {
		fail(errc::internal, "negative nu power outside W+");
	}
	auto [it, inserted] = terms_.try_emplace(key, c);
	if (!inserted) {
		it->second += c;
		if (it->second.is_zero())
			terms_.erase(it);
	}
}

WeylElement WeylElement::operator-() const
{
	WeylElement r(ctx_, extended_);
	for (const auto &t : terms_)
		r.terms_.emplace(t.first, -t.second);
	return r;
}

namespace {
void merge_context(WeylElement &dst, const WeylElement &src)
{
	if (!dst.context() && src.context())
		dst = WeylElement(src.context(), src.extended());
}
void check_context(const WeylElement &a, const WeylElement &b, const char *op)
{
	if (a.context() && b.context() && a.context() != b.context())
		fail(errc::mismatch, std::string("weyl context mismatch in ") + op);
}
} // namespace

WeylElement &WeylElement::operator+=(const WeylElement &o)
{
	if (!ctx_) {
		*this = o;
		return *this;
	}
	check_context(*this, o, "+");
	extended_ = extended_ || o.extended_;
	for (const auto &t : o.terms_)
		add_term(t.first, t.second);
	return *this;
}

WeylElement &WeylElement::operator-=(const WeylElement &o) { return *this += -o; }

bool operator==(const WeylElement &a, const WeylElement &b)
{
	if (a.terms_.empty() && b.terms_.empty())
		return true;
	check_context(a, b, "==");
	return a.terms_ == b.terms_;
}

WeylElement WeylElement::scaled(const Rat &q) const
{
	WeylElement r(ctx_, extended_);
	if (fedq::is_zero(q))
		return r;
	for (const auto &t : terms_)
		r.terms_.emplace(t.first, t.second.scaled(q));
	return r;
}

WeylElement WeylElement::scaled(const Scalar &s) const
{
	WeylElement r(ctx_, extended_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.scaled(s));
	return r;
}

WeylElement WeylElement::scaled(const ChartFunction &f) const
{
	WeylElement r(ctx_, extended_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second * f);
	return r;
}

WeylElement WeylElement::nu_shifted(int j) const
{
	WeylElement r(ctx_, extended_);
	const int dim = ctx_->chart().dim();
	for (const auto &t : terms_) {
		std::array<int, kMaxDim> ydeg{};
		for (int i = 0; i < dim; ++i)
			ydeg[static_cast<size_t>(i)] = t.first.ydeg(i);
		r.add_term(WeylKey::make(t.first.nu() + j, ydeg, t.first.mask(), dim), t.second);
	}
	return r;
}

WeylElement WeylElement::jet_derivative(int gen) const
{
	WeylElement r(ctx_, extended_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.jet_derivative(gen));
	return r;
}

WeylElement WeylElement::jet_antiderivative(const JetRing *ring, int gen) const
{
	WeylElement r(ctx_, extended_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.jet_antiderivative(ring, gen));
	return r;
}

WeylElement WeylElement::jet_truncated(int gen, int max_order) const
{
	WeylElement r(ctx_, extended_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.jet_truncated(gen, max_order));
	return r;
}

WeylElement WeylElement::jet_at_zero(int gen) const
{
	WeylElement r(ctx_, extended_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.jet_at_zero(gen));
	return r;
}

WeylElement WeylElement::jet_coefficient(int gen, int power) const
{
	WeylElement r(ctx_, extended_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.jet_coefficient(gen, power));
	return r;
}

int WeylElement::jet_degree(int gen) const
{
	int d = 0;
	for (const auto &t : terms_)
		d = std::max(d, t.second.jet_degree(gen));
	return d;
}

std::string WeylElement::str() const
{
	if (terms_.empty())
		return "0";
	std::string out;
	const int dim = ctx_->chart().dim();
	for (const auto &t : terms_) {
		if (!out.empty())
			out += " + ";
		std::string mono;
		if (t.first.nu() != 0) {
			mono += "nu";
			if (t.first.nu() != 1)
				mono += "^" + std::to_string(t.first.nu());
		}
		for (int i = 0; i < dim; ++i) {
			int e = t.first.ydeg(i);
			if (e == 0)
				continue;
			if (!mono.empty())
				mono += "*";
			mono += "y" + std::to_string(i + 1);
			if (e > 1)
				mono += "^" + std::to_string(e);
		}
		for (int i = 0; i < dim; ++i)
			if (t.first.mask() & (1u << i))
				mono += (mono.empty() ? "dx" : "*dx") + std::to_string(i + 1);
		std::string c = t.second.str();
		bool compound = c.find(' ') != std::string::npos || c.find('+') != std::string::npos;
		if (mono.empty())
			out += compound ? "(" + c + ")" : c;
		else if (c == "1")
			out += mono;
		else
			out += (compound ? "(" + c + ")" : c) + "*" + mono;
	}
	return out;
}

namespace {

// nonzero entries of Lambda as (i, l, sign)
struct LambdaPair {
	int i, l, sign;
};
std::vector<LambdaPair> lambda_pairs(const ChartSpec &chart)
{
	std::vector<LambdaPair> v;
	for (int i = 0; i < chart.dim(); ++i)
		for (int l = 0; l < chart.dim(); ++l) {
			int s = lambda_entry(chart, i, l);
			if (s != 0)
				v.push_back({i, l, s});
		}
	return v;
}

std::uint64_t pack_ydeg(const WeylKey &key) { return key.bits & 0x0000ffffffffffffull; }

using TermMap = std::map<WeylKey, ChartFunction>;

void map_add(TermMap &m, const WeylKey &key, const ChartFunction &c)
{
	if (c.is_zero())
		return;
	auto [it, inserted] = m.try_emplace(key, c);
	if (!inserted) {
		it->second += c;
		if (it->second.is_zero())
			m.erase(it);
	}
}

// Core of the fiberwise product, accumulating nu^{nu_shift} a o b into a raw
// term map. Every contraction step consumes one y on each side and adds one
// nu, so total degree is invariant across j; the truncation prunes whole term
// pairs by the post-shift degree. The raw map tolerates transient negative nu
// powers that cancel between the two passes of a commutator. With `koszul`,
// each pair carries the extra sign (-1)^{q_a q_b} of the graded commutator.
void circ_core(TermMap &out, const WeylElement &a, const WeylElement &b, const Rat &scale, bool koszul,
               int nu_shift)
{
	const ChartSpec chart = a.context()->chart();
	const int dim = chart.dim();
	const int cap = a.context()->trunc_degree();
	const auto pairs = lambda_pairs(chart);

	for (const auto &ta : a.terms()) {
		const int dega = ta.first.total_degree(dim);
		for (const auto &tb : b.terms()) {
			if (ta.first.mask() & tb.first.mask())
				continue;
			if (dega + tb.first.total_degree(dim) + 2 * nu_shift > cap)
				continue;
			int ws = wedge_sign(ta.first.mask(), tb.first.mask());
			if (koszul && (ta.first.form_degree() * tb.first.form_degree()) % 2 != 0)
				ws = -ws;
			ChartFunction coef = ta.second * tb.second;
			if (coef.is_zero())
				continue;
			const std::uint8_t mask = ta.first.mask() | tb.first.mask();
			const int knu = ta.first.nu() + tb.first.nu() + nu_shift;

			// contraction states: (remaining ydeg of a, of b) -> weight
			std::map<std::pair<std::uint64_t, std::uint64_t>, Rat> states;
			states.emplace(std::make_pair(pack_ydeg(ta.first), pack_ydeg(tb.first)), scale * ws);
			Rat jfactor = 1; // (1/2)^j / j!
			for (int j = 0;; ++j) {
				if (j > 0) {
					jfactor /= 2 * j;
					std::map<std::pair<std::uint64_t, std::uint64_t>, Rat> next;
					for (const auto &st : states) {
						for (const auto &p : pairs) {
							int ea = static_cast<int>((st.first.first >> (8 * p.i)) & 0xffu);
							int eb = static_cast<int>((st.first.second >> (8 * p.l)) & 0xffu);
							if (ea == 0 || eb == 0)
								continue;
							auto key = std::make_pair(st.first.first - (std::uint64_t(1) << (8 * p.i)),
							                          st.first.second - (std::uint64_t(1) << (8 * p.l)));
							Rat w = st.second * (p.sign * ea * eb);
							auto [it, inserted] = next.try_emplace(key, w);
							if (!inserted)
								it->second += w;
						}
					}
					states = std::move(next);
					if (states.empty())
						break;
				}
				for (const auto &st : states) {
					if (fedq::is_zero(st.second))
						continue;
					std::array<int, kMaxDim> ydeg{};
					for (int i = 0; i < dim; ++i)
						ydeg[static_cast<size_t>(i)] =
						    static_cast<int>((st.first.first >> (8 * i)) & 0xffu) +
						    static_cast<int>((st.first.second >> (8 * i)) & 0xffu);
					map_add(out, WeylKey::make(knu + j, ydeg, mask, dim), coef.scaled(st.second * jfactor));
				}
			}
		}
	}
}

WeylElement finalize(WeylContextPtr ctx, bool extended, TermMap &&raw)
{
	WeylElement out(std::move(ctx), extended);
	for (auto &t : raw)
		out.add_term(t.first, t.second);
	return out;
}

} // namespace

WeylElement circ(const WeylElement &a, const WeylElement &b)
{
	check_context(a, b, "circ");
	TermMap raw;
	circ_core(raw, a, b, Rat(1), false, 0);
	return finalize(a.context(), a.extended() || b.extended(), std::move(raw));
}

WeylElement commutator(const WeylElement &a, const WeylElement &b)
{
	check_context(a, b, "commutator");
	TermMap raw;
	circ_core(raw, a, b, Rat(1), false, 0);
	circ_core(raw, b, a, Rat(-1), true, 0);
	return finalize(a.context(), a.extended() || b.extended(), std::move(raw));
}

WeylElement circ_over_nu(const WeylElement &a, const WeylElement &b)
{
	check_context(a, b, "circ_over_nu");
	TermMap raw;
	circ_core(raw, a, b, Rat(1), false, -1);
	return finalize(a.context(), a.extended() || b.extended(), std::move(raw));
}

WeylElement commutator_over_nu(const WeylElement &a, const WeylElement &b)
{
	check_context(a, b, "commutator_over_nu");
	TermMap raw;
	circ_core(raw, a, b, Rat(1), false, -1);
	circ_core(raw, b, a, Rat(-1), true, -1);
	return finalize(a.context(), a.extended() || b.extended(), std::move(raw));
}

WeylElement mul_pointwise(const WeylElement &a, const WeylElement &b)
{
	check_context(a, b, "pointwise product");
	const int dim = a.context()->chart().dim();
	WeylElement out(a.context(), a.extended() || b.extended());
	for (const auto &ta : a.terms())
		for (const auto &tb : b.terms()) {
			int ws = wedge_sign(ta.first.mask(), tb.first.mask());
			if (ws == 0)
				continue;
			std::array<int, kMaxDim> ydeg{};
			for (int i = 0; i < dim; ++i)
				ydeg[static_cast<size_t>(i)] = ta.first.ydeg(i) + tb.first.ydeg(i);
			ChartFunction c = ta.second * tb.second;
			out.add_term(WeylKey::make(ta.first.nu() + tb.first.nu(), ydeg,
			                           static_cast<std::uint8_t>(ta.first.mask() | tb.first.mask()), dim),
			             ws == 1 ? c : -c);
		}
	return out;
}

NuSeries<ChartFunction> circ_scalar_part(const WeylElement &a, const WeylElement &b, int cap)
{
	check_context(a, b, "circ scalar part");
	const ChartSpec chart = a.context()->chart();
	const int dim = chart.dim();
	const auto pairs = lambda_pairs(chart);
	NuSeries<ChartFunction> out(cap, -64);

	// Only fully contracting pairs with no form content reach (y = 0, 0-form).
	for (const auto &ta : a.terms()) {
		if (ta.first.mask() != 0)
			continue;
		const int pa = ta.first.ytotal(dim);
		for (const auto &tb : b.terms()) {
			if (tb.first.mask() != 0)
				continue;
			if (tb.first.ytotal(dim) != pa)
				continue;
			if (ta.first.total_degree(dim) + tb.first.total_degree(dim) > a.context()->trunc_degree())
				continue;
			const int knu = ta.first.nu() + tb.first.nu() + pa;
			if (knu > cap)
				continue;
			std::map<std::pair<std::uint64_t, std::uint64_t>, Rat> states;
			states.emplace(std::make_pair(pack_ydeg(ta.first), pack_ydeg(tb.first)), Rat(1));
			Rat jfactor = 1;
			for (int j = 1; j <= pa; ++j) {
				jfactor /= 2 * j;
				std::map<std::pair<std::uint64_t, std::uint64_t>, Rat> next;
				for (const auto &st : states)
					for (const auto &p : pairs) {
						int ea = static_cast<int>((st.first.first >> (8 * p.i)) & 0xffu);
						int eb = static_cast<int>((st.first.second >> (8 * p.l)) & 0xffu);
						if (ea == 0 || eb == 0)
							continue;
						auto key = std::make_pair(st.first.first - (std::uint64_t(1) << (8 * p.i)),
						                          st.first.second - (std::uint64_t(1) << (8 * p.l)));
						Rat w = st.second * (p.sign * ea * eb);
						auto [it, inserted] = next.try_emplace(key, w);
						if (!inserted)
							it->second += w;
					}
				states = std::move(next);
				if (states.empty())
					break;
			}
			auto it = states.find(std::make_pair(std::uint64_t(0), std::uint64_t(0)));
			if (it == states.end() || fedq::is_zero(it->second))
				continue;
			ChartFunction add = (ta.second * tb.second).scaled(it->second * jfactor);
			if (!add.is_zero()) {
				ChartFunction cur = out.coeff(knu);
				cur += add;
				out.set(knu, cur);
			}
		}
	}
	return out;
}

WeylElement delta(const WeylElement &a)
{
	const int dim = a.context()->chart().dim();
	WeylElement out(a.context(), a.extended());
	for (const auto &t : a.terms()) {
		for (int k = 0; k < dim; ++k) {
			int e = t.first.ydeg(k);
			if (e == 0 || (t.first.mask() & (1u << k)))
				continue;
			std::array<int, kMaxDim> ydeg{};
			for (int i = 0; i < dim; ++i)
				ydeg[static_cast<size_t>(i)] = t.first.ydeg(i);
			ydeg[static_cast<size_t>(k)] -= 1;
			int sign = wedge_sign(static_cast<std::uint8_t>(1u << k), t.first.mask());
			out.add_term(WeylKey::make(t.first.nu(), ydeg,
			                           static_cast<std::uint8_t>(t.first.mask() | (1u << k)), dim),
			             t.second.scaled(Rat(e * sign)));
		}
	}
	return out;
}

WeylElement delta_inv(const WeylElement &a)
{
	const int dim = a.context()->chart().dim();
	WeylElement out(a.context(), a.extended());
	for (const auto &t : a.terms()) {
		const int p = t.first.ytotal(dim);
		const int q = t.first.form_degree();
		if (p + q == 0)
			continue;
		int below = 0;
		for (int k = 0; k < dim; ++k) {
			if (!(t.first.mask() & (1u << k)))
				continue;
			std::array<int, kMaxDim> ydeg{};
			for (int i = 0; i < dim; ++i)
				ydeg[static_cast<size_t>(i)] = t.first.ydeg(i);
			ydeg[static_cast<size_t>(k)] += 1;
			int sign = below % 2 == 0 ? 1 : -1;
			out.add_term(WeylKey::make(t.first.nu(), ydeg,
			                           static_cast<std::uint8_t>(t.first.mask() & ~(1u << k)), dim),
			             t.second.scaled(Rat(sign, p + q)));
			++below;
		}
	}
	return out;
}

NuSeries<ChartFunction> sigma(const WeylElement &a) { return a.y0_part(); }

WeylElement d_x(const WeylElement &a)
{
	const int dim = a.context()->chart().dim();
	WeylElement out(a.context(), a.extended());
	for (const auto &t : a.terms()) {
		for (int j = 0; j < dim; ++j) {
			if (t.first.mask() & (1u << j))
				continue;
			ChartFunction dc = t.second.derivative(j);
			if (dc.is_zero())
				continue;
			std::array<int, kMaxDim> ydeg{};
			for (int i = 0; i < dim; ++i)
				ydeg[static_cast<size_t>(i)] = t.first.ydeg(i);
			int sign = wedge_sign(static_cast<std::uint8_t>(1u << j), t.first.mask());
			out.add_term(WeylKey::make(t.first.nu(), ydeg,
			                           static_cast<std::uint8_t>(t.first.mask() | (1u << j)), dim),
			             sign == 1 ? dc : -dc);
		}
	}
	return out;
}

WeylElement contract_weyl(const WeylElement &a, const VectorField &x)
{
	const int dim = a.context()->chart().dim();
	check_chart(a.context()->chart(), x.chart(), "weyl contraction");
	WeylElement out(a.context(), a.extended());
	for (const auto &t : a.terms()) {
		int below = 0;
		for (int j = 0; j < dim; ++j) {
			if (!(t.first.mask() & (1u << j)))
				continue;
			ChartFunction c = t.second * x.comp(j);
			if (!c.is_zero()) {
				std::array<int, kMaxDim> ydeg{};
				for (int i = 0; i < dim; ++i)
					ydeg[static_cast<size_t>(i)] = t.first.ydeg(i);
				out.add_term(WeylKey::make(t.first.nu(), ydeg,
				                           static_cast<std::uint8_t>(t.first.mask() & ~(1u << j)), dim),
				             below % 2 == 0 ? c : -c);
			}
			++below;
		}
	}
	return out;
}

ConnectionLift lift_connection(const WeylContextPtr &ctx, const Connection &conn)
{
	if (!conn.is_symplectic())
		fail(errc::precondition, "connection lift requires a symplectic connection");
	const ChartSpec chart = ctx->chart();
	check_chart(chart, conn.chart(), "connection lift");
	const int dim = chart.dim();

	ConnectionLift lift{WeylElement(ctx), WeylElement(ctx)};
	for (int l = 0; l < dim; ++l)
		for (int k = 0; k < dim; ++k) {
			int w = omega_entry(chart, l, k);
			if (w == 0)
				continue;
			for (int i = 0; i < dim; ++i)
				for (int j = 0; j < dim; ++j) {
					const ChartFunction &g = conn.gamma(k, i, j);
					if (g.is_zero())
						continue;
					std::array<int, kMaxDim> ydeg{};
					ydeg[static_cast<size_t>(l)] += 1;
					ydeg[static_cast<size_t>(j)] += 1;
					lift.gamma_bar.add_term(WeylKey::make(0, ydeg, static_cast<std::uint8_t>(1u << i), dim),
					                        g.scaled(rat(w, 2)));
				}
		}

	CurvatureTensor curv(conn);
	for (int i = 0; i < dim; ++i)
		for (int r = 0; r < dim; ++r) {
			int w = omega_entry(chart, i, r);
			if (w == 0)
				continue;
			for (int j = 0; j < dim; ++j)
				for (int k = 0; k < dim; ++k)
					for (int l = 0; l < k; ++l) {
						// sum over all (k,l): the two orders combine into
						// twice the k<l term on dx^k ^ dx^l
						const ChartFunction &rc = curv.at(r, j, k, l);
						if (rc.is_zero())
							continue;
						std::array<int, kMaxDim> ydeg{};
						ydeg[static_cast<size_t>(i)] += 1;
						ydeg[static_cast<size_t>(j)] += 1;
						std::uint8_t mask = static_cast<std::uint8_t>((1u << k) | (1u << l));
						int ws = wedge_sign(static_cast<std::uint8_t>(1u << k),
						                    static_cast<std::uint8_t>(1u << l));
						lift.r_bar.add_term(WeylKey::make(0, ydeg, mask, dim),
						                    rc.scaled(rat(w * ws, 2)));
					}
		}
	return lift;
}

WeylElement covariant_deriv(const ConnectionLift &lift, const WeylElement &a)
{
	WeylElement out = d_x(a);
	if (!lift.gamma_bar.is_zero())
		out += commutator_over_nu(lift.gamma_bar, a);
	return out;
}

WeylElement pullback_weyl(const WeylElement &a, const DiffeoFamily &f)
{
	const WeylContextPtr ctx = a.context();
	const ChartSpec chart = ctx->chart();
	check_chart(chart, f.chart(), "weyl pullback");
	const int dim = chart.dim();
	WeylElement out(ctx, a.extended());
	for (const auto &t : a.terms()) {
		WeylElement piece = WeylElement::from_function(ctx, compose(t.second, f), t.first.nu());
		if (a.extended())
			piece = piece.as_extended();
		for (int j = 0; j < dim; ++j) {
			for (int rep = 0; rep < t.first.ydeg(j); ++rep) {
				// y^j -> J^j_i y^i
				WeylElement lin(ctx, a.extended());
				for (int i = 0; i < dim; ++i) {
					std::array<int, kMaxDim> e{};
					e[static_cast<size_t>(i)] = 1;
					lin += WeylElement::y_monomial(ctx, e, f.jacobian(j, i));
				}
				piece = mul_pointwise(piece, lin);
			}
		}
		for (int j = 0; j < dim; ++j) {
			if (!(t.first.mask() & (1u << j)))
				continue;
			// dx^j -> J^j_i dx^i (applied in increasing j, preserving order)
			WeylElement lin(ctx, a.extended());
			for (int i = 0; i < dim; ++i) {
				DifferentialForm df = DifferentialForm::monomial(f.jacobian(j, i), {i});
				lin += WeylElement::from_form(ctx, df);
			}
			piece = mul_pointwise(piece, lin);
		}
		out += piece;
	}
	return out;
}

WeylElement truncate_degree(const WeylElement &a, int cutoff)
{
	WeylElement out(a.context(), a.extended());
	const int dim = a.context()->chart().dim();
	for (const auto &t : a.terms())
		if (t.first.total_degree(dim) <= cutoff)
			out.add_term(t.first, t.second);
	return out;
}

bool is_zero_through(const WeylElement &a, int cutoff)
{
	const int dim = a.context()->chart().dim();
	for (const auto &t : a.terms())
		if (t.first.total_degree(dim) <= cutoff)
			return false;
	return true;
}

bool equal_through(const WeylElement &a, const WeylElement &b, int cutoff)
{
	return is_zero_through(a - b, cutoff);
}

} // namespace fedq
