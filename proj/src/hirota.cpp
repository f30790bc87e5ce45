#include <dnkw/hirota.hpp>

#include <algorithm>
#include <cmath>

namespace dnkw
{

SeriesContext SeriesContext::make(int n, int degree)
{
    if (degree < 1)
        throw Error(ErrorCode::out_of_range, "truncation degree must be positive");
    SeriesContext ctx;
    ctx.n = n;
    ctx.degree = degree;
    ctx.t_space = VariableSpace::make(n, {{Family::t, degree}}, degree);
    ctx.ty_space = VariableSpace::make(n, {{Family::t, degree}, {Family::y, degree}}, degree);
    ctx.d_space = VariableSpace::make(n, {{Family::d, degree}}, degree);
    return ctx;
}

namespace
{

void require_space(const TruncatedSeries &s, const SpacePtr &expected, const char *what)
{
    if (s.space() != expected && !(*s.space() == *expected))
        throw Error(ErrorCode::truncation_mismatch, std::string(what) + " lives in the wrong variable space");
}

std::vector<int> family_vars(const VariableSpace &sp, Family f)
{
    std::vector<int> out;
    for (int i = 0; i < sp.size(); ++i)
        if (sp.variable(i).family == f)
            out.push_back(i);
    return out;
}

MonomialKey family_mask(const VariableSpace &sp, Family f)
{
    MonomialKey mask = 0;
    for (int i : family_vars(sp, f)) {
        const auto &v = sp.variable(i);
        mask |= ((MonomialKey{1} << v.width) - 1) << v.offset;
    }
    return mask;
}

// All family-f monomials of weight <= bound, in no particular order.
std::vector<MonomialKey> enumerate_monomials(const VariableSpace &sp, Family f, int bound)
{
    const auto vars = family_vars(sp, f);
    std::vector<MonomialKey> out;
    std::function<void(std::size_t, MonomialKey, int)> rec = [&](std::size_t q, MonomialKey key, int w) {
        if (q == vars.size()) {
            out.push_back(key);
            return;
        }
        const auto &v = sp.variable(vars[q]);
        for (int a = 0; w + a * v.weight <= bound && a <= v.max_exponent; ++a)
            rec(q + 1, key + static_cast<MonomialKey>(a) * sp.unit(vars[q]), w + a * v.weight);
    };
    rec(0, 0, 0);
    return out;
}

// Graded lex: lower weight first, then larger exponent of the earlier variable first.
bool graded_lex_less(const VariableSpace &sp, const std::vector<int> &vars, MonomialKey a, MonomialKey b)
{
    int wa = 0, wb = 0;
    for (int i : vars) {
        wa += sp.exponent(a, i) * sp.variable(i).weight;
        wb += sp.exponent(b, i) * sp.variable(i).weight;
    }
    if (wa != wb)
        return wa < wb;
    for (int i : vars) {
        const int ea = sp.exponent(a, i), eb = sp.exponent(b, i);
        if (ea != eb)
            return ea > eb;
    }
    return false;
}

SymbolMonomial to_symbol_monomial(const VariableSpace &sp, const std::vector<int> &vars, MonomialKey key)
{
    SymbolMonomial out;
    for (int i : vars) {
        const int a = sp.exponent(key, i);
        if (a > 0)
            out.emplace_back(sp.variable(i).exponent, a);
    }
    return out;
}

Complex beta_of(const HierarchyCoefficients &c, int r, const Exponent &e)
{
    return c.beta_at(r, e.label);
}

Complex beta_of_negated(const HierarchyCoefficients &c, int r, const Exponent &e)
{
    return c.beta_at(r, negate_label(c.n, e.label));
}

void require_coefficients(const HierarchyCoefficients &c, const SeriesContext &ctx)
{
    if (c.n != ctx.n)
        throw Error(ErrorCode::dimension_mismatch, "hierarchy coefficients belong to a different rank");
}

} // namespace

TruncatedSeries shift_substitute(const TruncatedSeries &tau, int sign, const SeriesContext &ctx)
{
    require_space(tau, ctx.t_space, "tau");
    const auto &src = *ctx.t_space;
    const auto &dst = *ctx.ty_space;
    const double s = sign >= 0 ? 1.0 : -1.0;

    std::vector<int> t_index(src.size()), y_index(src.size());
    for (int i = 0; i < src.size(); ++i) {
        t_index[i] = dst.index_of(Family::t, src.variable(i).exponent);
        y_index[i] = dst.index_of(Family::y, src.variable(i).exponent);
    }

    struct Partial
    {
        MonomialKey key;
        Complex c;
    };
    TruncatedSeries out(ctx.ty_space);
    std::vector<Partial> cur, next;
    for (const auto &[key, c] : tau.terms()) {
        cur.assign(1, {0, c});
        for (int i = 0; i < src.size(); ++i) {
            const int a = src.exponent(key, i);
            if (a == 0)
                continue;
            next.clear();
            for (const auto &p : cur) {
                // (t + s y)^a = sum_k C(a,k) s^k t^{a-k} y^k
                double binom = 1.0;
                for (int k = 0; k <= a; ++k) {
                    const MonomialKey k2 = p.key + static_cast<MonomialKey>(a - k) * dst.unit(t_index[i]) +
                                           static_cast<MonomialKey>(k) * dst.unit(y_index[i]);
                    next.push_back({k2, p.c * binom * std::pow(s, k)});
                    binom = binom * (a - k) / (k + 1);
                }
            }
            std::swap(cur, next);
        }
        for (const auto &p : cur)
            out.add_term(p.key, p.c);
    }
    return out;
}

std::vector<TruncatedSeries> schur_expand(const ExponentCoefficient &c, Family f, int m_max, const SpacePtr &space)
{
    if (m_max > space->total_bound())
        throw Error(ErrorCode::out_of_range, "Schur degree exceeds the truncation bound");
    // a_k = sum over exponents of value k of c(j) v_j
    std::vector<TruncatedSeries> a(m_max + 1, TruncatedSeries(space));
    for (int i = 0; i < space->size(); ++i) {
        const auto &v = space->variable(i);
        if (v.family != f || v.weight > m_max)
            continue;
        a[v.weight].add_term(space->unit(i), c(v.exponent));
    }
    // m S_m = sum_{k=1}^m k a_k S_{m-k}
    std::vector<TruncatedSeries> s;
    s.push_back(TruncatedSeries::constant(space, 1.0));
    for (int m = 1; m <= m_max; ++m) {
        TruncatedSeries acc(space);
        for (int k = 1; k <= m; ++k)
            if (!a[k].empty())
                acc += mul_truncated(a[k], s[m - k]) * Complex(static_cast<double>(k));
        acc *= Complex(1.0 / m);
        s.push_back(std::move(acc));
    }
    return s;
}

std::vector<TruncatedSeries> schur_expand(const std::map<ExponentLabel, Complex> &c, Family f, int m_max,
                                          const SpacePtr &space)
{
    return schur_expand(
        [&c](const Exponent &e) {
            const auto it = c.find(e.label);
            return it == c.end() ? Complex(0.0) : it->second;
        },
        f, m_max, space);
}

TruncatedSeries apply_differential(const TruncatedSeries &op, Family op_family, const TruncatedSeries &target,
                                   Family target_family)
{
    const auto &osp = *op.space();
    const auto &tsp = *target.space();
    const auto op_vars = family_vars(osp, op_family);
    std::vector<int> map(osp.size(), -1);
    for (int i : op_vars)
        map[i] = tsp.index_of(target_family, osp.variable(i).exponent);

    std::map<MonomialKey, Complex> acc;
    std::vector<std::pair<int, int>> orders;
    for (const auto &[okey, oc] : op.terms()) {
        orders.clear();
        bool vanishes = false;
        for (int i = 0; i < osp.size(); ++i) {
            const int k = osp.exponent(okey, i);
            if (k == 0)
                continue;
            if (map[i] < 0) {
                // derivative in a variable the target cannot contain
                vanishes = true;
                break;
            }
            orders.emplace_back(map[i], k);
        }
        if (vanishes)
            continue;
        for (const auto &[tkey, tc] : target.terms()) {
            Complex c = oc * tc;
            MonomialKey key = tkey;
            bool zero = false;
            for (const auto &[var, k] : orders) {
                const int a = tsp.exponent(tkey, var);
                if (a < k) {
                    zero = true;
                    break;
                }
                double ff = 1.0;
                for (int q = 0; q < k; ++q)
                    ff *= a - q;
                c *= ff;
                key -= static_cast<MonomialKey>(k) * tsp.unit(var);
            }
            if (!zero)
                acc[key] += c;
        }
    }
    TruncatedSeries out(target.space());
    for (const auto &[k, c] : acc)
        if (c != Complex(0.0))
            out.add_term(k, c);
    out.prune();
    return out;
}

TruncatedSeries bilinear_pair(const TruncatedSeries &tau1, const TruncatedSeries &tau2, const SeriesContext &ctx)
{
    return mul_truncated(shift_substitute(tau1, +1, ctx), shift_substitute(tau2, -1, ctx));
}

TruncatedSeries hirota_apply(const std::vector<Exponent> &d_monomial, const TruncatedSeries &tau1,
                             const TruncatedSeries &tau2, const SeriesContext &ctx)
{
    auto f = bilinear_pair(tau1, tau2, ctx);
    int weight = 0;
    for (const auto &e : d_monomial) {
        f = f.derivative(Family::y, e);
        weight += e.value;
    }
    if (weight > ctx.degree)
        return TruncatedSeries(ctx.t_space);
    return f.set_zero(Family::y).embed(ctx.t_space).truncated(ctx.degree - weight);
}

TruncatedSeries kw_lhs(const TruncatedSeries &tau1, const TruncatedSeries &tau2, const HierarchyCoefficients &coeffs,
                       const SeriesContext &ctx)
{
    require_coefficients(coeffs, ctx);
    const auto f = bilinear_pair(tau1, tau2, ctx);
    const int h = ctx.h();
    const int big_n = ctx.degree;

    // -2h sum_j j y_j d/dy_j
    TruncatedSeries out = f.euler(Family::y) * Complex(-2.0 * h);
    for (int r = 1; r <= coeffs.n; ++r) {
        const auto sy = schur_expand([&](const Exponent &e) { return 2.0 * beta_of(coeffs, r, e); }, Family::y, big_n,
                                     ctx.ty_space);
        const auto sd = schur_expand(
            [&](const Exponent &e) { return -beta_of_negated(coeffs, r, e) / static_cast<double>(e.value); },
            Family::d, big_n, ctx.d_space);
        TruncatedSeries sum_r(ctx.ty_space);
        for (int m = 1; m <= big_n; ++m) {
            if (sy[m].empty() || sd[m].empty())
                continue;
            const auto derived = apply_differential(sd[m], Family::d, f, Family::y);
            if (derived.empty())
                continue;
            sum_r += mul_truncated(sy[m], derived);
        }
        out += sum_r * coeffs.g[r];
    }
    out.prune();
    return out;
}

BilinearParts gm_parts(const TruncatedSeries &tau1, const TruncatedSeries &tau2, const HierarchyCoefficients &coeffs,
                       const SeriesContext &ctx, int window)
{
    require_coefficients(coeffs, ctx);
    if (window < 0)
        window = ctx.degree;
    const auto f = bilinear_pair(tau1, tau2, ctx);
    const int h = ctx.h();

    // tau1(t+y-xi) tau2(t-y+xi) = F(t, y - xi), xi_j = beta_{r,-j}/(j z^j).
    TruncatedSeries lhs(ctx.ty_space);
    for (int r = 1; r <= coeffs.n; ++r) {
        const auto shifted = shift_to_laurent(
            f, Family::y,
            [&](const Exponent &e) { return -beta_of_negated(coeffs, r, e) / static_cast<double>(e.value); }, -1,
            window);
        const auto creation = exp_laurent(
            ctx.ty_space, Family::y, [&](const Exponent &e) { return 2.0 * beta_of(coeffs, r, e); }, +1, window);
        // res_z z^{-1}(...) is the z^0 coefficient
        lhs += constant_term_of_product(creation, shifted) * coeffs.g[r];
    }
    TruncatedSeries rhs = f.euler(Family::y) * Complex(2.0 * h) + f * Complex(g_sum_target(coeffs.n));
    lhs.prune();
    rhs.prune();
    return {std::move(lhs), std::move(rhs)};
}

TruncatedSeries gm_residual(const TruncatedSeries &tau1, const TruncatedSeries &tau2,
                            const HierarchyCoefficients &coeffs, const SeriesContext &ctx, int window)
{
    auto parts = gm_parts(tau1, tau2, coeffs, ctx, window);
    auto out = parts.lhs - parts.rhs;
    out.prune();
    return out;
}

LaurentBlock vertex_apply(int r, const TruncatedSeries &tau, const HierarchyCoefficients &coeffs,
                          const SeriesContext &ctx, int window, int sign)
{
    require_coefficients(coeffs, ctx);
    require_space(tau, ctx.t_space, "tau");
    if (window < 0)
        window = ctx.degree;
    const double s = sign >= 0 ? 1.0 : -1.0;
    // exp(-s sum beta_{r,-j}/(j z^j) d/dt_j) tau = tau(t - s xi)
    const auto annihilated = shift_to_laurent(
        tau, Family::t,
        [&](const Exponent &e) { return -s * beta_of_negated(coeffs, r, e) / static_cast<double>(e.value); }, -1,
        window);
    const auto creation =
        exp_laurent(ctx.t_space, Family::t, [&](const Exponent &e) { return s * beta_of(coeffs, r, e); }, +1, window);
    return creation * annihilated;
}

std::string to_string(const Generator &g)
{
    switch (g.kind) {
    case Generator::Kind::central: return "c";
    case Generator::Kind::heisenberg_pos: return "H_" + to_string(g.exponent);
    case Generator::Kind::heisenberg_neg: return "H_-" + to_string(g.exponent);
    case Generator::Kind::x_mode: return "X^(" + std::to_string(g.r) + ")_" + std::to_string(g.m);
    case Generator::Kind::y_mode: return "Y^(" + std::to_string(g.r) + ")_" + std::to_string(-g.m);
    case Generator::Kind::degree: return "d_0";
    }
    return "?";
}

TruncatedSeries algebra_action(const Generator &gen, const TruncatedSeries &tau, const HierarchyCoefficients &coeffs,
                               const SeriesContext &ctx)
{
    require_space(tau, ctx.t_space, "tau");
    const double inv_h = 1.0 / ctx.h();
    switch (gen.kind) {
    case Generator::Kind::central: return tau;
    case Generator::Kind::heisenberg_pos: return tau.derivative(Family::t, gen.exponent);
    case Generator::Kind::heisenberg_neg:
        return mul_truncated(
            TruncatedSeries::variable(ctx.t_space, Family::t, gen.exponent, static_cast<double>(gen.exponent.value)),
            tau);
    case Generator::Kind::degree: return tau.euler(Family::t) * Complex(-1.0);
    case Generator::Kind::x_mode:
    case Generator::Kind::y_mode: {
        if (!coeffs.has_rho_pairings())
            throw Error(ErrorCode::unknown_generator, "vertex-operator action needs the rho pairings");
        if (gen.r < 1 || gen.r > coeffs.n)
            throw Error(ErrorCode::out_of_range, "generator index r out of range");
        if (std::abs(gen.m) > ctx.degree)
            throw Error(ErrorCode::window_overflow, "mode index exceeds the Laurent window");
        if (gen.kind == Generator::Kind::x_mode) {
            const auto block = vertex_apply(gen.r, tau, coeffs, ctx, ctx.degree, +1);
            return block.coefficient(-gen.m) * (-inv_h * coeffs.rho_x[gen.r]);
        }
        const auto block = vertex_apply(gen.r, tau, coeffs, ctx, ctx.degree, -1);
        return block.coefficient(gen.m) * (-inv_h * coeffs.rho_y[gen.r]);
    }
    }
    throw Error(ErrorCode::unknown_generator, "unknown generator");
}

OrbitReport orbit_infinitesimal_check(const Generator &gen, int order, const HierarchyCoefficients &coeffs,
                                      const SeriesContext &ctx)
{
    if (gen.kind == Generator::Kind::central || gen.kind == Generator::Kind::degree)
        throw Error(ErrorCode::unknown_generator, "orbit check excludes c and d_0");
    if (order < 1 || order > 2)
        throw Error(ErrorCode::out_of_range, "orbit check supports orders 1 and 2");

    const auto one = TruncatedSeries::constant(ctx.t_space, 1.0);
    const auto v1 = algebra_action(gen, one, coeffs, ctx);

    auto relative = [](const BilinearParts &p) {
        const double scale = std::max({1.0, p.lhs.max_abs(), p.rhs.max_abs()});
        return (p.lhs - p.rhs).max_abs() / scale;
    };
    auto combine = [](std::vector<std::pair<BilinearParts, double>> parts) {
        BilinearParts sum{TruncatedSeries(parts.front().first.lhs.space()),
                          TruncatedSeries(parts.front().first.lhs.space())};
        for (auto &[p, w] : parts) {
            sum.lhs += p.lhs * Complex(w);
            sum.rhs += p.rhs * Complex(w);
        }
        return sum;
    };

    OrbitReport report;
    report.order1 = relative(combine({{gm_parts(v1, one, coeffs, ctx), 1.0}, {gm_parts(one, v1, coeffs, ctx), 1.0}}));
    if (order >= 2) {
        const auto v2 = algebra_action(gen, v1, coeffs, ctx);
        report.order2 = relative(combine({{gm_parts(v2, one, coeffs, ctx), 1.0},
                                          {gm_parts(v1, v1, coeffs, ctx), 2.0},
                                          {gm_parts(one, v2, coeffs, ctx), 1.0}}));
    }
    return report;
}

std::string monomial_string(const SymbolMonomial &m, const char *prefix)
{
    if (m.empty())
        return "1";
    std::string out;
    for (const auto &[e, a] : m) {
        if (!out.empty())
            out += '*';
        out += prefix;
        out += '_';
        out += to_string(e);
        if (a > 1)
            out += '^' + std::to_string(a);
    }
    return out;
}

int monomial_weight(const SymbolMonomial &m)
{
    int w = 0;
    for (const auto &[e, a] : m)
        w += e.value * a;
    return w;
}

std::vector<HierarchyEquation> equations_emit(const HierarchyCoefficients &coeffs, int max_y_degree, double eps)
{
    if (max_y_degree < 0)
        throw Error(ErrorCode::out_of_range, "y-degree must be nonnegative");
    const int n = coeffs.n;
    const int h = coeffs.h;
    const int bound = max_y_degree;
    const auto space = VariableSpace::make(n, {{Family::y, bound}, {Family::d, bound}}, 2 * bound);
    const auto y_vars = family_vars(*space, Family::y);
    const auto d_vars = family_vars(*space, Family::d);

    // -2h sum_j j y_j D_j + sum_r g_r sum_{m>=1} S_m(2 beta y) S_m(-beta D / j)
    TruncatedSeries op(space);
    TruncatedSeries yd(space);
    for (std::size_t q = 0; q < y_vars.size(); ++q) {
        const auto &e = space->variable(y_vars[q]).exponent;
        const auto pair_key = space->unit(y_vars[q]) + space->unit(space->index_of(Family::d, e));
        op.add_term(pair_key, -2.0 * h * e.value);
        yd.add_term(pair_key, 1.0);
    }
    if (bound > 0) {
        for (int r = 1; r <= n; ++r) {
            const auto sy = schur_expand([&](const Exponent &e) { return 2.0 * beta_of(coeffs, r, e); }, Family::y,
                                         bound, space);
            const auto sd = schur_expand(
                [&](const Exponent &e) { return -beta_of_negated(coeffs, r, e) / static_cast<double>(e.value); },
                Family::d, bound, space);
            TruncatedSeries sum_r(space);
            for (int m = 1; m <= bound; ++m)
                sum_r += mul_truncated(sy[m], sd[m]);
            op += sum_r * coeffs.g[r];
        }
    }
    const auto generating = mul_truncated(op, exp_series(yd));

    const MonomialKey y_mask = family_mask(*space, Family::y);
    std::map<MonomialKey, std::map<MonomialKey, Complex>> grouped;
    for (const auto &[key, c] : generating.terms())
        grouped[key & y_mask][key & ~y_mask] += c;

    auto y_monos = enumerate_monomials(*space, Family::y, bound);
    std::sort(y_monos.begin(), y_monos.end(),
              [&](MonomialKey a, MonomialKey b) { return graded_lex_less(*space, y_vars, a, b); });

    std::vector<HierarchyEquation> out;
    out.reserve(y_monos.size());
    for (const auto ykey : y_monos) {
        HierarchyEquation eq;
        eq.y_monomial = to_symbol_monomial(*space, y_vars, ykey);
        const auto it = grouped.find(ykey);
        if (it != grouped.end()) {
            std::vector<std::pair<MonomialKey, Complex>> terms(it->second.begin(), it->second.end());
            std::sort(terms.begin(), terms.end(),
                      [&](const auto &a, const auto &b) { return graded_lex_less(*space, d_vars, a.first, b.first); });
            double scale = 1.0;
            for (const auto &[dk, c] : terms)
                scale = std::max(scale, std::abs(c));
            for (const auto &[dk, c] : terms) {
                if (std::abs(c) <= prune_tolerance * scale)
                    continue;
                DTerm term{to_symbol_monomial(*space, d_vars, dk), c};
                int order = 0;
                for (const auto &[e, a] : term.monomial)
                    order += a;
                if (order % 2 == 0 && std::abs(c) > eps * scale)
                    eq.trivial = false;
                eq.d_polynomial.push_back(std::move(term));
            }
        }
        out.push_back(std::move(eq));
    }
    return out;
}

TruncatedSeries apply_equation(const HierarchyEquation &eq, const TruncatedSeries &tau1, const TruncatedSeries &tau2,
                               const SeriesContext &ctx)
{
    TruncatedSeries out(ctx.t_space);
    for (const auto &term : eq.d_polynomial) {
        std::vector<Exponent> ds;
        for (const auto &[e, a] : term.monomial)
            for (int q = 0; q < a; ++q)
                ds.push_back(e);
        out += hirota_apply(ds, tau1, tau2, ctx) * term.coefficient;
    }
    return out;
}

TruncatedSeries family_coefficient(const TruncatedSeries &s, Family f, const SymbolMonomial &monomial,
                                   const SpacePtr &target)
{
    const auto &sp = *s.space();
    MonomialKey wanted = 0;
    for (const auto &[e, a] : monomial) {
        const int idx = sp.index_of(f, e);
        if (idx < 0 || a > sp.variable(idx).max_exponent)
            return TruncatedSeries(target);
        wanted += static_cast<MonomialKey>(a) * sp.unit(idx);
    }
    const MonomialKey mask = family_mask(sp, f);
    TruncatedSeries rest(s.space());
    for (const auto &[key, c] : s.terms())
        if ((key & mask) == wanted)
            rest.add_term(key & ~mask, c);
    return rest.embed(target);
}

TruncatedSeries random_tau(const SeriesContext &ctx, int max_weight, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto monos = enumerate_monomials(*ctx.t_space, Family::t, std::min(max_weight, ctx.degree));
    std::sort(monos.begin(), monos.end());
    TruncatedSeries out(ctx.t_space);
    for (const auto key : monos) {
        const double re = unit(rng);
        const double im = unit(rng);
        out.add_term(key, Complex(re, im));
    }
    return out;
}

TruncatedSeries exp_linear_tau(const SeriesContext &ctx, const std::vector<std::pair<Exponent, Complex>> &c)
{
    TruncatedSeries linear(ctx.t_space);
    for (const auto &[e, v] : c)
        linear += TruncatedSeries::variable(ctx.t_space, Family::t, e, v);
    return exp_series(linear);
}

} // namespace dnkw
