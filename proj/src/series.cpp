#include <dnkw/series.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>

namespace dnkw
{

Exponent make_exponent(int n, const ExponentLabel &label, int level)
{
    if (!is_valid_label(n, label))
        throw Error(ErrorCode::invalid_tag, "invalid exponent label " + to_string(label));
    if (level < 0)
        throw Error(ErrorCode::out_of_range, "exponent level must be nonnegative");
    return {label, level, label.value + level * (2 * n - 2)};
}

std::string to_string(const Exponent &e)
{
    return std::to_string(e.value) + (e.label.primed ? "p" : "");
}

std::vector<Exponent> exponents_up_to(int n, int bound)
{
    std::vector<Exponent> out;
    const int h = 2 * n - 2;
    for (int level = 0; level * h < bound; ++level)
        for (const auto &label : exponent_labels(n))
            if (label.value + level * h <= bound)
                out.push_back(make_exponent(n, label, level));
    std::sort(out.begin(), out.end());
    return out;
}

const char *family_prefix(Family f)
{
    switch (f) {
    case Family::t: return "t";
    case Family::y: return "y";
    case Family::d: return "D";
    }
    return "?";
}

SpacePtr VariableSpace::make(int n, std::vector<FamilyBound> families, int total_bound)
{
    if (families.empty() || static_cast<int>(families.size()) > max_families)
        throw Error(ErrorCode::out_of_range, "a variable space holds one to three families");
    if (total_bound < 0)
        throw Error(ErrorCode::out_of_range, "truncation bound must be nonnegative");
    auto space = std::make_shared<VariableSpace>();
    space->m_n = n;
    space->m_total = total_bound;
    space->m_families = families;

    int offset = 0;
    for (int slot = 0; slot < static_cast<int>(families.size()); ++slot) {
        const auto &fb = families[slot];
        for (int other = 0; other < slot; ++other)
            if (families[other].family == fb.family)
                throw Error(ErrorCode::out_of_range, "duplicate variable family");
        const int bound = std::min(fb.bound, total_bound);
        for (const auto &e : exponents_up_to(n, bound)) {
            Variable v;
            v.family = fb.family;
            v.family_slot = slot;
            v.exponent = e;
            v.weight = e.value;
            v.max_exponent = bound / e.value;
            v.width = std::bit_width(static_cast<unsigned>(v.max_exponent));
            v.offset = offset;
            offset += v.width;
            space->m_vars.push_back(v);
        }
    }
    if (offset > 64)
        throw Error(ErrorCode::layout_overflow,
                    "monomial layout needs " + std::to_string(offset) + " bits; reduce the truncation bound");
    return space;
}

bool VariableSpace::has_family(Family f) const
{
    return family_slot(f) >= 0;
}

int VariableSpace::family_slot(Family f) const
{
    for (int i = 0; i < static_cast<int>(m_families.size()); ++i)
        if (m_families[i].family == f)
            return i;
    return -1;
}

int VariableSpace::family_bound(Family f) const
{
    const int slot = family_slot(f);
    return slot < 0 ? 0 : std::min(m_families[slot].bound, m_total);
}

int VariableSpace::index_of(Family f, const Exponent &e) const
{
    for (int i = 0; i < size(); ++i)
        if (m_vars[i].family == f && m_vars[i].exponent == e)
            return i;
    return -1;
}

int VariableSpace::weight(MonomialKey key) const
{
    int w = 0;
    for (int i = 0; i < size(); ++i)
        w += exponent(key, i) * m_vars[i].weight;
    return w;
}

int VariableSpace::family_weight(MonomialKey key, int slot) const
{
    int w = 0;
    for (int i = 0; i < size(); ++i)
        if (m_vars[i].family_slot == slot)
            w += exponent(key, i) * m_vars[i].weight;
    return w;
}

bool VariableSpace::fits(int total, const int *family_weights) const
{
    if (total > m_total)
        return false;
    for (int s = 0; s < static_cast<int>(m_families.size()); ++s)
        if (family_weights[s] > m_families[s].bound)
            return false;
    return true;
}

std::string VariableSpace::monomial_string(MonomialKey key) const
{
    std::string out;
    for (int i = 0; i < size(); ++i) {
        const int a = exponent(key, i);
        if (a == 0)
            continue;
        if (!out.empty())
            out += '*';
        out += family_prefix(m_vars[i].family);
        out += '_';
        out += dnkw::to_string(m_vars[i].exponent);
        if (a > 1)
            out += '^' + std::to_string(a);
    }
    return out.empty() ? "1" : out;
}

namespace
{

struct WeightInfo
{
    int total = 0;
    std::array<int, max_families> family{};
};

WeightInfo weigh(const VariableSpace &sp, MonomialKey key)
{
    WeightInfo w;
    for (int i = 0; i < sp.size(); ++i) {
        const int a = sp.exponent(key, i);
        if (a == 0)
            continue;
        const auto &v = sp.variable(i);
        w.total += a * v.weight;
        w.family[v.family_slot] += a * v.weight;
    }
    return w;
}

void require_same_space(const TruncatedSeries &a, const TruncatedSeries &b)
{
    if (a.space() != b.space() && !(*a.space() == *b.space()))
        throw Error(ErrorCode::truncation_mismatch, "series live in different variable spaces");
}

} // namespace

TruncatedSeries TruncatedSeries::constant(SpacePtr space, Complex c)
{
    TruncatedSeries s(std::move(space));
    s.add_term(0, c);
    return s;
}

TruncatedSeries TruncatedSeries::variable(SpacePtr space, Family f, const Exponent &e, Complex c)
{
    const int idx = space->index_of(f, e);
    TruncatedSeries s(std::move(space));
    if (idx >= 0)
        s.add_term(s.m_space->unit(idx), c);
    return s;
}

Complex TruncatedSeries::coefficient(MonomialKey key) const
{
    const auto it = m_terms.find(key);
    return it == m_terms.end() ? Complex(0.0) : it->second;
}

void TruncatedSeries::add_term(MonomialKey key, Complex c)
{
    const auto w = weigh(*m_space, key);
    if (!m_space->fits(w.total, w.family.data()))
        return;
    auto [it, inserted] = m_terms.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0))
            m_terms.erase(it);
    }
}

TruncatedSeries &TruncatedSeries::operator+=(const TruncatedSeries &o)
{
    require_same_space(*this, o);
    for (const auto &[k, c] : o.m_terms) {
        auto [it, inserted] = m_terms.try_emplace(k, c);
        if (!inserted)
            it->second += c;
    }
    return *this;
}

TruncatedSeries &TruncatedSeries::operator-=(const TruncatedSeries &o)
{
    require_same_space(*this, o);
    for (const auto &[k, c] : o.m_terms) {
        auto [it, inserted] = m_terms.try_emplace(k, -c);
        if (!inserted)
            it->second -= c;
    }
    return *this;
}

TruncatedSeries &TruncatedSeries::operator*=(Complex c)
{
    if (c == Complex(0.0)) {
        m_terms.clear();
        return *this;
    }
    for (auto &[k, v] : m_terms)
        v *= c;
    return *this;
}

TruncatedSeries mul_truncated(const TruncatedSeries &a, const TruncatedSeries &b)
{
    require_same_space(a, b);
    const auto &sp = *a.space();
    const int nf = static_cast<int>(sp.families().size());

    struct Entry
    {
        MonomialKey key;
        Complex c;
        WeightInfo w;
    };
    auto prepare = [&sp](const TruncatedSeries &s) {
        std::vector<Entry> out;
        out.reserve(s.size());
        for (const auto &[k, c] : s.terms())
            out.push_back({k, c, weigh(sp, k)});
        std::sort(out.begin(), out.end(), [](const Entry &x, const Entry &y) { return x.w.total < y.w.total; });
        return out;
    };
    const auto ea = prepare(a);
    const auto eb = prepare(b);

    std::map<MonomialKey, Complex> acc;
    std::array<int, max_families> fw{};
    for (const auto &x : ea) {
        for (const auto &y : eb) {
            const int total = x.w.total + y.w.total;
            if (total > sp.total_bound())
                break; // eb sorted by weight
            for (int s = 0; s < nf; ++s)
                fw[s] = x.w.family[s] + y.w.family[s];
            if (!sp.fits(total, fw.data()))
                continue;
            acc[x.key + y.key] += x.c * y.c;
        }
    }
    TruncatedSeries result(a.space());
    for (const auto &[k, c] : acc)
        if (c != Complex(0.0))
            result.add_term(k, c);
    result.prune();
    return result;
}

TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b)
{
    return mul_truncated(a, b);
}

TruncatedSeries TruncatedSeries::derivative(int var) const
{
    TruncatedSeries out(m_space);
    const MonomialKey unit = m_space->unit(var);
    for (const auto &[k, c] : m_terms) {
        const int a = m_space->exponent(k, var);
        if (a > 0)
            out.m_terms.emplace(k - unit, c * static_cast<double>(a));
    }
    return out;
}

TruncatedSeries TruncatedSeries::derivative(Family f, const Exponent &e) const
{
    const int idx = m_space->index_of(f, e);
    if (idx < 0)
        return TruncatedSeries(m_space);
    return derivative(idx);
}

void TruncatedSeries::prune(double tol)
{
    const double cut = tol * max_abs();
    std::erase_if(m_terms, [cut](const auto &kv) { return std::abs(kv.second) <= cut; });
}

double TruncatedSeries::max_abs() const
{
    double m = 0.0;
    for (const auto &[k, c] : m_terms)
        m = std::max(m, std::abs(c));
    return m;
}

TruncatedSeries TruncatedSeries::truncated(int bound) const
{
    TruncatedSeries out(m_space);
    for (const auto &[k, c] : m_terms)
        if (m_space->weight(k) <= bound)
            out.m_terms.emplace(k, c);
    return out;
}

TruncatedSeries TruncatedSeries::embed(const SpacePtr &target) const
{
    TruncatedSeries out(target);
    std::vector<int> map(m_space->size());
    for (int i = 0; i < m_space->size(); ++i) {
        const auto &v = m_space->variable(i);
        map[i] = target->index_of(v.family, v.exponent);
    }
    for (const auto &[k, c] : m_terms) {
        MonomialKey key = 0;
        bool ok = true;
        for (int i = 0; i < m_space->size() && ok; ++i) {
            const int a = m_space->exponent(k, i);
            if (a == 0)
                continue;
            if (map[i] < 0 || a > target->variable(map[i]).max_exponent)
                ok = false;
            else
                key += static_cast<MonomialKey>(a) * target->unit(map[i]);
        }
        if (ok)
            out.add_term(key, c);
    }
    return out;
}

TruncatedSeries TruncatedSeries::set_zero(Family f) const
{
    TruncatedSeries out(m_space);
    for (const auto &[k, c] : m_terms) {
        bool keep = true;
        for (int i = 0; i < m_space->size() && keep; ++i)
            if (m_space->variable(i).family == f && m_space->exponent(k, i) > 0)
                keep = false;
        if (keep)
            out.m_terms.emplace(k, c);
    }
    return out;
}

TruncatedSeries TruncatedSeries::euler(Family f) const
{
    TruncatedSeries out(m_space);
    const int slot = m_space->family_slot(f);
    if (slot < 0)
        return out;
    for (const auto &[k, c] : m_terms) {
        const int w = m_space->family_weight(k, slot);
        if (w != 0)
            out.m_terms.emplace(k, c * static_cast<double>(w));
    }
    return out;
}

Complex TruncatedSeries::evaluate(const std::function<Complex(const VariableSpace::Variable &)> &value) const
{
    std::vector<Complex> vals(m_space->size());
    for (int i = 0; i < m_space->size(); ++i)
        vals[i] = value(m_space->variable(i));
    Complex sum = 0.0;
    for (const auto &[k, c] : m_terms) {
        Complex term = c;
        for (int i = 0; i < m_space->size(); ++i) {
            const int a = m_space->exponent(k, i);
            if (a > 0)
                term *= std::pow(vals[i], a);
        }
        sum += term;
    }
    return sum;
}

std::string TruncatedSeries::to_string() const
{
    if (m_terms.empty())
        return "0";
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto &[k, c] : m_terms) {
        if (!first)
            os << " + ";
        first = false;
        os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        if (k != 0)
            os << '*' << m_space->monomial_string(k);
    }
    return os.str();
}

TruncatedSeries exp_series(const TruncatedSeries &a)
{
    if (a.coefficient(0) != Complex(0.0))
        throw Error(ErrorCode::out_of_range, "exp_series needs a series without constant term");
    auto result = TruncatedSeries::constant(a.space(), 1.0);
    auto power = TruncatedSeries::constant(a.space(), 1.0);
    for (int k = 1; k <= a.space()->total_bound(); ++k) {
        power = mul_truncated(power, a) * Complex(1.0 / k);
        if (power.empty())
            break;
        result += power;
    }
    return result;
}

double max_abs_difference(const TruncatedSeries &a, const TruncatedSeries &b)
{
    return (a - b).max_abs();
}

TruncatedSeries LaurentBlock::coefficient(int degree) const
{
    const auto it = m_blocks.find(degree);
    return it == m_blocks.end() ? TruncatedSeries(m_space) : it->second;
}

void LaurentBlock::add(int degree, const TruncatedSeries &s)
{
    if (degree < -m_window || degree > m_window)
        throw Error(ErrorCode::window_overflow,
                    "z-degree " + std::to_string(degree) + " outside window " + std::to_string(m_window));
    auto [it, inserted] = m_blocks.try_emplace(degree, s);
    if (!inserted)
        it->second += s;
}

LaurentBlock &LaurentBlock::operator+=(const LaurentBlock &o)
{
    for (const auto &[d, s] : o.m_blocks)
        add(d, s);
    return *this;
}

LaurentBlock operator*(const LaurentBlock &a, const LaurentBlock &b)
{
    const int window = std::min(a.m_window, b.m_window);
    LaurentBlock out(a.m_space, window);
    for (const auto &[da, sa] : a.m_blocks)
        for (const auto &[db, sb] : b.m_blocks) {
            const int d = da + db;
            if (d < -window || d > window)
                continue;
            auto prod = mul_truncated(sa, sb);
            if (!prod.empty())
                out.add(d, prod);
        }
    return out;
}

TruncatedSeries constant_term_of_product(const LaurentBlock &a, const LaurentBlock &b)
{
    TruncatedSeries out(a.m_space);
    for (const auto &[da, sa] : a.m_blocks) {
        const auto it = b.m_blocks.find(-da);
        if (it != b.m_blocks.end())
            out += mul_truncated(sa, it->second);
    }
    return out;
}

namespace
{

double binomial(int a, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (a - k + i) / i;
    return r;
}

void require_window(const VariableSpace &sp, Family f, int window)
{
    if (window < sp.family_bound(f))
        throw Error(ErrorCode::window_overflow, "Laurent window " + std::to_string(window) +
                                                    " is smaller than the truncation bound " +
                                                    std::to_string(sp.family_bound(f)));
}

} // namespace

LaurentBlock shift_to_laurent(const TruncatedSeries &s, Family f,
                              const std::function<Complex(const Exponent &)> &shift, int z_sign, int window)
{
    const auto &sp = *s.space();
    require_window(sp, f, window);
    std::vector<int> vars;
    std::vector<Complex> shifts;
    for (int i = 0; i < sp.size(); ++i)
        if (sp.variable(i).family == f) {
            vars.push_back(i);
            shifts.push_back(shift(sp.variable(i).exponent));
        }

    std::map<int, std::map<MonomialKey, Complex>> acc;
    // Expand prod_j (v_j + c_j z^{+-w_j})^{a_j} one variable at a time.
    struct Partial
    {
        MonomialKey key;
        Complex c;
        int zdeg;
    };
    std::vector<Partial> cur, next;
    for (const auto &[key, c] : s.terms()) {
        cur.assign(1, {key, c, 0});
        for (std::size_t q = 0; q < vars.size(); ++q) {
            const int var = vars[q];
            const int a = sp.exponent(key, var);
            if (a == 0 || shifts[q] == Complex(0.0))
                continue;
            const int w = sp.variable(var).weight;
            const MonomialKey unit = sp.unit(var);
            next.clear();
            for (const auto &p : cur) {
                Complex pw = 1.0;
                for (int k = 0; k <= a; ++k) {
                    next.push_back({p.key - static_cast<MonomialKey>(k) * unit, p.c * binomial(a, k) * pw,
                                    p.zdeg + z_sign * w * k});
                    pw *= shifts[q];
                }
            }
            std::swap(cur, next);
        }
        for (const auto &p : cur)
            acc[p.zdeg][p.key] += p.c;
    }

    LaurentBlock out(s.space(), window);
    for (const auto &[d, terms] : acc) {
        TruncatedSeries block(s.space());
        for (const auto &[k, c] : terms)
            if (c != Complex(0.0))
                block.add_term(k, c);
        if (!block.empty())
            out.add(d, block);
    }
    return out;
}

LaurentBlock exp_laurent(const SpacePtr &space, Family f, const std::function<Complex(const Exponent &)> &c,
                         int z_sign, int window)
{
    require_window(*space, f, window);
    LaurentBlock linear(space, window);
    for (int i = 0; i < space->size(); ++i) {
        const auto &v = space->variable(i);
        if (v.family != f)
            continue;
        const Complex coeff = c(v.exponent);
        if (coeff == Complex(0.0))
            continue;
        TruncatedSeries term(space);
        term.add_term(space->unit(i), coeff);
        linear.add(z_sign * v.weight, term);
    }

    LaurentBlock result(space, window);
    result.add(0, TruncatedSeries::constant(space, 1.0));
    LaurentBlock power = result;
    for (int k = 1; k <= space->family_bound(f); ++k) {
        power = power * linear;
        if (power.blocks().empty())
            break;
        const Complex inv = 1.0 / static_cast<double>(k);
        LaurentBlock scaled(space, window);
        for (const auto &[d, s] : power.blocks())
            scaled.add(d, s * inv);
        power = scaled;
        result += power;
    }
    return result;
}

} // namespace dnkw
