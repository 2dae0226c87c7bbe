#include "fedq/chart.hpp"

#include "fedq/error.hpp"

namespace fedq {

void check_chart(const ChartSpec &a, const ChartSpec &b, const char *op)
{
	if (!(a == b))
		fail(errc::mismatch, std::string("chart mismatch in ") + op);
}

Mono Mono::affine(const std::array<int, kMaxDim> &exps, int dim)
{
	Mono mono;
	for (int i = 0; i < dim; ++i) {
		if (exps[static_cast<size_t>(i)] < 0 || exps[static_cast<size_t>(i)] > 255)
			fail(errc::domain, "affine exponent out of range");
		mono.bits |= std::uint64_t(static_cast<unsigned>(exps[static_cast<size_t>(i)])) << (8 * i);
	}
	return mono;
}

std::pair<Mono, int> Mono::trig(bool is_sin, std::array<int, kMaxDim> freq, int dim)
{
	int lead = 0;
	for (int i = 0; i < dim; ++i) {
		if (freq[static_cast<size_t>(i)] != 0) {
			lead = freq[static_cast<size_t>(i)];
			break;
		}
	}
	int sign = 1;
	if (lead == 0) {
		if (is_sin)
			return {Mono{}, 0}; // sin(0) == 0
		return {Mono{}, 1};     // cos(0) == 1, the constant monomial
	}
	if (lead < 0) {
		for (int i = 0; i < dim; ++i)
			freq[static_cast<size_t>(i)] = -freq[static_cast<size_t>(i)];
		if (is_sin)
			sign = -1;
	}
	Mono mono;
	mono.bits = std::uint64_t(is_sin ? 2 : 1) << 56;
	for (int i = 0; i < dim; ++i) {
		int k = freq[static_cast<size_t>(i)];
		if (k < -127 || k > 127)
			fail(errc::domain, "torus frequency out of range");
		mono.bits |= std::uint64_t(static_cast<unsigned>(k + 128)) << (8 * i);
	}
	return {mono, sign};
}

ChartFunction::ChartFunction(const ChartSpec &chart, const Scalar &c) : chart_(chart)
{
	if (!c.is_zero())
		terms_.emplace(Mono::constant(), c);
}

ChartFunction ChartFunction::coordinate(const ChartSpec &chart, int i)
{
	if (chart.mode != ChartMode::affine)
		fail(errc::unsupported, "bare coordinates exist only on affine charts");
	if (i < 0 || i >= chart.dim())
		fail(errc::domain, "coordinate index out of range");
	std::array<int, kMaxDim> exps{};
	exps[static_cast<size_t>(i)] = 1;
	ChartFunction f(chart);
	f.terms_.emplace(Mono::affine(exps, chart.dim()), Scalar(Rat(1)));
	return f;
}

ChartFunction ChartFunction::trig(const ChartSpec &chart, bool is_sin, const std::array<int, kMaxDim> &freq)
{
	if (chart.mode != ChartMode::torus)
		fail(errc::unsupported, "trigonometric monomials exist only on torus charts");
	auto [mono, sign] = Mono::trig(is_sin, freq, chart.dim());
	ChartFunction f(chart);
	if (sign != 0)
		f.terms_.emplace(mono, Scalar(Rat(sign)));
	return f;
}

bool ChartFunction::is_nilpotent() const
{
	for (const auto &t : terms_)
		if (!t.second.is_nilpotent())
			return false;
	return true;
}

Scalar ChartFunction::constant_coefficient() const
{
	auto it = terms_.find(Mono::constant());
	return it == terms_.end() ? Scalar() : it->second;
}

void ChartFunction::add_term(const Mono &mono, const Scalar &c)
{
	if (c.is_zero())
		return;
	auto [it, inserted] = terms_.try_emplace(mono, c);
	if (!inserted) {
		it->second += c;
		if (it->second.is_zero())
			terms_.erase(it);
	}
}

ChartFunction ChartFunction::operator-() const
{
	ChartFunction r(chart_);
	for (const auto &t : terms_)
		r.terms_.emplace(t.first, -t.second);
	return r;
}

ChartFunction &ChartFunction::operator+=(const ChartFunction &o)
{
	if (terms_.empty() && chart_ == ChartSpec{})
		chart_ = o.chart_;
	check_chart(chart_, o.chart_, "+");
	for (const auto &t : o.terms_)
		add_term(t.first, t.second);
	return *this;
}

ChartFunction &ChartFunction::operator-=(const ChartFunction &o)
{
	if (terms_.empty() && chart_ == ChartSpec{})
		chart_ = o.chart_;
	check_chart(chart_, o.chart_, "-");
	for (const auto &t : o.terms_)
		add_term(t.first, -t.second);
	return *this;
}

bool operator==(const ChartFunction &a, const ChartFunction &b)
{
	if (a.terms_.empty() && b.terms_.empty())
		return true;
	return a.chart_ == b.chart_ && a.terms_ == b.terms_;
}

namespace {

// Product-to-sum reduction of two torus monomials: emits up to two canonical
// terms with rational half weights into `out`.
void mul_trig(ChartFunction &out, const Mono &ma, const Mono &mb, const Scalar &coef, int dim)
{
	const bool sa = ma.is_sin(), sb = mb.is_sin();
	std::array<int, kMaxDim> sum{}, dif{};
	const bool ca = ma.is_constant(), cb = mb.is_constant();
	for (int i = 0; i < dim; ++i) {
		int fa = ca ? 0 : ma.freq(i);
		int fb = cb ? 0 : mb.freq(i);
		sum[static_cast<size_t>(i)] = fa + fb;
		dif[static_cast<size_t>(i)] = fa - fb;
	}
	Rat half(1, 2);
	auto emit = [&](bool is_sin, const std::array<int, kMaxDim> &freq, const Rat &w) {
		auto [mono, sign] = Mono::trig(is_sin, freq, dim);
		if (sign != 0)
			out.add_term(mono, coef.scaled(w * sign));
	};
	if (!sa && !sb) { // cos a cos b = 1/2 cos(a-b) + 1/2 cos(a+b)
		emit(false, dif, half);
		emit(false, sum, half);
	} else if (sa && sb) { // sin a sin b = 1/2 cos(a-b) - 1/2 cos(a+b)
		emit(false, dif, half);
		emit(false, sum, -half);
	} else if (sa && !sb) { // sin a cos b = 1/2 sin(a+b) + 1/2 sin(a-b)
		emit(true, sum, half);
		emit(true, dif, half);
	} else { // cos a sin b = 1/2 sin(a+b) - 1/2 sin(a-b)
		emit(true, sum, half);
		emit(true, dif, -half);
	}
}

} // namespace

ChartFunction operator*(const ChartFunction &a, const ChartFunction &b)
{
	if (a.is_zero())
		return a;
	if (b.is_zero())
		return b;
	check_chart(a.chart_, b.chart_, "*");
	const int dim = a.chart_.dim();
	ChartFunction r(a.chart_);
	for (const auto &ta : a.terms_) {
		for (const auto &tb : b.terms_) {
			Scalar c = ta.second * tb.second;
			if (c.is_zero())
				continue;
			if (a.chart_.mode == ChartMode::affine) {
				std::array<int, kMaxDim> exps{};
				for (int i = 0; i < dim; ++i)
					exps[static_cast<size_t>(i)] = ta.first.exp(i) + tb.first.exp(i);
				r.add_term(Mono::affine(exps, dim), c);
			} else {
				mul_trig(r, ta.first, tb.first, c, dim);
			}
		}
	}
	return r;
}

ChartFunction ChartFunction::scaled(const Rat &q) const
{
	ChartFunction r(chart_);
	if (fedq::is_zero(q))
		return r;
	for (const auto &t : terms_)
		r.terms_.emplace(t.first, t.second.scaled(q));
	return r;
}

ChartFunction ChartFunction::scaled(const Scalar &s) const
{
	ChartFunction r(chart_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second * s);
	return r;
}

ChartFunction ChartFunction::derivative(int i) const
{
	if (i < 0 || i >= chart_.dim())
		fail(errc::domain, "derivative index out of range");
	ChartFunction r(chart_);
	for (const auto &t : terms_) {
		if (chart_.mode == ChartMode::affine) {
			int e = t.first.exp(i);
			if (e == 0)
				continue;
			std::array<int, kMaxDim> exps{};
			for (int j = 0; j < chart_.dim(); ++j)
				exps[static_cast<size_t>(j)] = t.first.exp(j);
			exps[static_cast<size_t>(i)] -= 1;
			r.add_term(Mono::affine(exps, chart_.dim()), t.second.scaled(Rat(e)));
		} else {
			if (t.first.is_constant())
				continue;
			int k = t.first.freq(i);
			if (k == 0)
				continue;
			std::array<int, kMaxDim> freq{};
			for (int j = 0; j < chart_.dim(); ++j)
				freq[static_cast<size_t>(j)] = t.first.freq(j);
			// d/dx cos(kx) = -k sin(kx); d/dx sin(kx) = k cos(kx)
			auto [mono, sign] = Mono::trig(!t.first.is_sin(), freq, chart_.dim());
			Rat w = t.first.is_sin() ? Rat(k) : Rat(-k);
			r.add_term(mono, t.second.scaled(w * sign));
		}
	}
	return r;
}

ChartFunction ChartFunction::jet_derivative(int gen) const
{
	ChartFunction r(chart_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.derivative(gen));
	return r;
}

ChartFunction ChartFunction::jet_antiderivative(const JetRing *ring, int gen) const
{
	ChartFunction r(chart_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.antiderivative(ring, gen));
	return r;
}

ChartFunction ChartFunction::jet_truncated(int gen, int max_order) const
{
	ChartFunction r(chart_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.jet_truncated(gen, max_order));
	return r;
}

ChartFunction ChartFunction::jet_at_zero(int gen) const
{
	ChartFunction r(chart_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.at_zero(gen));
	return r;
}

ChartFunction ChartFunction::jet_coefficient(int gen, int power) const
{
	ChartFunction r(chart_);
	for (const auto &t : terms_)
		r.add_term(t.first, t.second.coefficient(gen, power));
	return r;
}

int ChartFunction::jet_degree(int gen) const
{
	int d = 0;
	for (const auto &t : terms_)
		d = std::max(d, t.second.degree(gen));
	return d;
}

std::string ChartFunction::str() const
{
	if (terms_.empty())
		return "0";
	std::string out;
	bool first = true;
	for (const auto &t : terms_) {
		std::string mono;
		if (chart_.mode == ChartMode::affine) {
			for (int i = 0; i < chart_.dim(); ++i) {
				int e = t.first.exp(i);
				if (e == 0)
					continue;
				if (!mono.empty())
					mono += "*";
				mono += "x" + std::to_string(i + 1);
				if (e > 1)
					mono += "^" + std::to_string(e);
			}
		} else if (!t.first.is_constant()) {
			std::string arg;
			for (int i = 0; i < chart_.dim(); ++i) {
				int k = t.first.freq(i);
				if (k == 0)
					continue;
				if (!arg.empty())
					arg += k > 0 ? "+" : "-";
				else if (k < 0)
					arg += "-";
				int a = k > 0 ? k : -k;
				if (a != 1)
					arg += std::to_string(a) + "*";
				arg += "x" + std::to_string(i + 1);
			}
			mono = (t.first.is_sin() ? "sin(" : "cos(") + arg + ")";
		}
		std::string cs = t.second.str();
		bool neg = false;
		if (cs.size() > 1 && cs[0] == '-' && cs.find(" + ") == std::string::npos && cs.find(" - ") == std::string::npos) {
			neg = true;
			cs = cs.substr(1);
		}
		bool compound = cs.find(' ') != std::string::npos;
		if (first)
			out += neg ? "-" : "";
		else
			out += neg ? " - " : " + ";
		first = false;
		if (mono.empty())
			out += compound ? "(" + cs + ")" : cs;
		else if (cs == "1" && !compound)
			out += mono;
		else
			out += (compound ? "(" + cs + ")" : cs) + "*" + mono;
	}
	return out;
}

PiScalar &PiScalar::operator+=(const PiScalar &o)
{
	if (o.is_zero())
		return *this;
	if (is_zero()) {
		*this = o;
		return *this;
	}
	if (twopi_power != o.twopi_power)
		fail(errc::mismatch, "adding PiScalars with different 2*pi powers");
	value += o.value;
	if (value.is_zero())
		twopi_power = 0;
	return *this;
}

std::string PiScalar::str() const
{
	if (is_zero())
		return "0";
	std::string v = value.str();
	bool compound = v.find(' ') != std::string::npos;
	if (compound)
		v = "(" + v + ")";
	if (twopi_power == 0)
		return v;
	std::string p = "(2*pi)";
	if (twopi_power != 1)
		p += "^" + std::to_string(twopi_power);
	if (v == "1")
		return p;
	return v + "*" + p;
}

} // namespace fedq
