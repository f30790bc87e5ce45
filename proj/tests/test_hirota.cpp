#include <random>

#include <doctest.h>

#include <dnkw/hirota.hpp>

using namespace dnkw;

namespace
{

Exponent ex(int n, int value, bool primed = false)
{
    const int h = 2 * n - 2;
    const int base = primed ? n - 1 : (value - 1) % h + 1;
    return make_exponent(n, ExponentLabel{base, primed}, (value - base) / h);
}

double relative(const TruncatedSeries &a, const TruncatedSeries &b)
{
    return max_abs_difference(a, b) / std::max({1.0, a.max_abs(), b.max_abs()});
}

const HierarchyCoefficients &coefficients(int n)
{
    static std::map<int, HierarchyCoefficients> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, extract_coefficients(n)).first;
    return it->second;
}

// D_j^k f.g = sum_i C(k,i) (-1)^(k-i) d^i f d^(k-i) g, one variable at a time.
std::vector<std::pair<TruncatedSeries, TruncatedSeries>> hirota_pairs(const std::vector<Exponent> &ds,
                                                                      const TruncatedSeries &f,
                                                                      const TruncatedSeries &g)
{
    std::vector<std::pair<TruncatedSeries, TruncatedSeries>> terms{{f, g}};
    for (const auto &e : ds) {
        std::vector<std::pair<TruncatedSeries, TruncatedSeries>> next;
        for (const auto &[a, b] : terms) {
            next.emplace_back(a.derivative(Family::t, e), b);
            next.emplace_back(a, b.derivative(Family::t, e) * Complex(-1.0));
        }
        terms = std::move(next);
    }
    return terms;
}

TruncatedSeries hirota_oracle(const std::vector<Exponent> &ds, const TruncatedSeries &f, const TruncatedSeries &g,
                              int bound)
{
    TruncatedSeries out(f.space());
    for (const auto &[a, b] : hirota_pairs(ds, f, g))
        out += mul_truncated(a, b);
    return out.truncated(bound);
}

TruncatedSeries small_tau(const SeriesContext &ctx, std::mt19937_64 &rng)
{
    return random_tau(ctx, 3, rng);
}

} // namespace

TEST_CASE("series context")
{
    const auto ctx = SeriesContext::make(4, 8);
    CHECK(ctx.h() == 6);
    CHECK(ctx.t_space->size() == 5);
    CHECK(ctx.ty_space->size() == 10);
    CHECK_THROWS_AS(SeriesContext::make(4, 0), Error);
}

TEST_CASE("shift substitution")
{
    const auto ctx = SeriesContext::make(4, 6);
    const auto t1 = TruncatedSeries::variable(ctx.t_space, Family::t, ex(4, 1));
    const auto s = shift_substitute(mul_truncated(t1, t1), -1, ctx);
    const auto tt = TruncatedSeries::variable(ctx.ty_space, Family::t, ex(4, 1));
    const auto yy = TruncatedSeries::variable(ctx.ty_space, Family::y, ex(4, 1));
    const auto want = mul_truncated(tt - yy, tt - yy);
    CHECK(max_abs_difference(s, want) < 1e-15);
    CHECK_THROWS_AS(shift_substitute(s, 1, ctx), Error);
}

TEST_CASE("differential operators from symbols")
{
    const auto ctx = SeriesContext::make(4, 6);
    const auto d1 = TruncatedSeries::variable(ctx.d_space, Family::d, ex(4, 1));
    const auto y1 = TruncatedSeries::variable(ctx.ty_space, Family::y, ex(4, 1));
    const auto y3 = mul_truncated(mul_truncated(y1, y1), y1);
    const auto r = apply_differential(mul_truncated(d1, d1), Family::d, y3, Family::y);
    CHECK(max_abs_difference(r, y1 * Complex(6.0)) < 1e-15);
    // a symbol whose variable the target lacks kills everything
    const auto d5 = TruncatedSeries::variable(ctx.d_space, Family::d, ex(4, 5));
    CHECK(apply_differential(d5, Family::d, y3, Family::y).empty());
}

TEST_CASE("Hirota derivatives against the Leibniz oracle")
{
    std::mt19937_64 rng(31);
    for (int n : {4, 5}) {
        const auto ctx = SeriesContext::make(n, 8);
        const auto f = random_tau(ctx, 8, rng);
        const auto g = random_tau(ctx, 8, rng);
        const auto es = exponents_up_to(n, 8);
        const std::vector<std::vector<Exponent>> monomials{
            {es[0]}, {es[0], es[0]}, {es[0], es[1]}, {es[1], es[2]}, {es[0], es[0], es[0], es[0]}, {es[0], es[3]}};
        for (const auto &ds : monomials) {
            int w = 0;
            for (const auto &e : ds)
                w += e.value;
            CHECK(relative(hirota_apply(ds, f, g, ctx), hirota_oracle(ds, f, g, 8 - w)) < 1e-13);
        }
        // D_1 t_1 . 1 = 1
        const auto one = TruncatedSeries::constant(ctx.t_space, 1.0);
        const auto t1 = TruncatedSeries::variable(ctx.t_space, Family::t, ex(n, 1));
        CHECK(max_abs_difference(hirota_apply({ex(n, 1)}, t1, one, ctx), one) < 1e-15);
        // too heavy for the truncation
        CHECK(hirota_apply({ex(n, 7), ex(n, 3)}, f, g, ctx).empty());
    }
}

TEST_CASE("odd annihilation")
{
    std::mt19937_64 rng(37);
    for (int n : {3, 4, 5}) {
        const auto ctx = SeriesContext::make(n, 8);
        const auto f = random_tau(ctx, 8, rng);
        for (const auto &e : exponents_up_to(n, 8)) {
            CHECK(hirota_apply({e}, f, f, ctx).max_abs() < 1e-13);
            CHECK(hirota_apply({e, e, e}, f, f, ctx).max_abs() < 1e-12);
        }
    }
}

TEST_CASE("Schur route and residue route")
{
    std::mt19937_64 rng(41);
    for (int n : {4, 5}) {
        CAPTURE(n);
        const auto ctx = SeriesContext::make(n, 8);
        const auto &c = coefficients(n);
        const auto one = TruncatedSeries::constant(ctx.t_space, 1.0);
        CHECK(kw_lhs(one, one, c, ctx).max_abs() < 1e-13);
        CHECK(gm_residual(one, one, c, ctx).max_abs() < 1e-12);

        const auto t1 = random_tau(ctx, 8, rng);
        const auto t1b = random_tau(ctx, 8, rng);
        const auto t2 = random_tau(ctx, 8, rng);
        CHECK(relative(kw_lhs(t1, t2, c, ctx), gm_residual(t1, t2, c, ctx)) < 1e-12);

        const Complex a(0.3, -1.2), b(2.0, 0.5);
        const auto lhs = kw_lhs(t1 * a + t1b * b, t2, c, ctx);
        const auto rhs = kw_lhs(t1, t2, c, ctx) * a + kw_lhs(t1b, t2, c, ctx) * b;
        CHECK(relative(lhs, rhs) < 1e-12);

        // the two forms differ by (sum g - target) times the bilinear pair
        auto shifted = c;
        shifted.g[1] += 0.75;
        const auto kw = kw_lhs(t1, t2, shifted, ctx);
        const auto diff = kw - gm_residual(t1, t2, shifted, ctx);
        // cancellation error scales with the operands, not with the difference
        CHECK(max_abs_difference(diff, bilinear_pair(t1, t2, ctx) * Complex(-0.75)) / std::max(1.0, kw.max_abs()) <
              1e-13);

        try {
            gm_residual(t1, t2, c, ctx, 7);
            FAIL("window below N must be rejected");
        } catch (const Error &e) {
            CHECK(e.code() == ErrorCode::window_overflow);
        }
        CHECK_THROWS_AS(kw_lhs(t1, t2, coefficients(n == 4 ? 5 : 4), ctx), Error);
    }
}

TEST_CASE("vacuum at every truncation")
{
    for (int n = 3; n <= 8; ++n)
        for (int big_n = 1; big_n <= 12; ++big_n) {
            const auto ctx = SeriesContext::make(n, big_n);
            const auto one = TruncatedSeries::constant(ctx.t_space, 1.0);
            CAPTURE(n);
            CAPTURE(big_n);
            CHECK(gm_residual(one, one, coefficients(n), ctx).max_abs() < 1e-11);
        }
}

TEST_CASE("Heisenberg orbit points")
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-0.35, 0.35);
    for (int n : {3, 4, 5, 6}) {
        const auto ctx = SeriesContext::make(n, 8);
        const auto &c = coefficients(n);
        const auto exp_t1 = exp_linear_tau(ctx, {{ex(n, 1), Complex(0.8, 0.1)}});
        CHECK(gm_residual(exp_t1, exp_t1, c, ctx).max_abs() < 1e-10);

        std::vector<std::pair<Exponent, Complex>> lin;
        for (const auto &e : exponents_up_to(n, 3))
            lin.emplace_back(e, Complex(u(rng), u(rng)));
        const auto tau = exp_linear_tau(ctx, lin);
        const auto parts = gm_parts(tau, tau, c, ctx);
        CHECK(relative(parts.lhs, parts.rhs) < 1e-10);

        // a generic polynomial is not a solution
        const auto generic = random_tau(ctx, 8, rng);
        CHECK(gm_residual(generic, generic, c, ctx).max_abs() > 1e-3);
    }
}

TEST_CASE("vertex operators")
{
    const int n = 4;
    const auto ctx = SeriesContext::make(n, 8);
    const auto &c = coefficients(n);
    const auto one = TruncatedSeries::constant(ctx.t_space, 1.0);
    for (int r = 1; r <= n; ++r) {
        const auto x = vertex_apply(r, one, c, ctx);
        CHECK(max_abs_difference(x.coefficient(0), one) == 0.0);
        const auto t1 = TruncatedSeries::variable(ctx.t_space, Family::t, ex(n, 1), c.beta_at(r, {1, false}));
        CHECK(max_abs_difference(x.coefficient(1), t1) < 1e-14);
        for (int d = -8; d < 0; ++d)
            CHECK(x.coefficient(d).empty());
    }

    // [d/dt_j, X(z)] = beta_j z^j X(z)
    std::mt19937_64 rng(47);
    const auto tau = small_tau(ctx, rng);
    for (int r = 1; r <= n; ++r)
        for (const auto &e : exponents_up_to(n, 5)) {
            const auto xt = vertex_apply(r, tau, c, ctx);
            const auto xdt = vertex_apply(r, tau.derivative(Family::t, e), c, ctx);
            const Complex beta = c.beta_at(r, e.label);
            const int bound = 8 - e.value;
            for (int d = -8; d <= 8; ++d) {
                const auto lhs = (xt.coefficient(d).derivative(Family::t, e) - xdt.coefficient(d)).truncated(bound);
                const auto rhs = (xt.coefficient(d - e.value) * beta).truncated(bound);
                CHECK(relative(lhs, rhs) < 1e-12);
            }
        }
    CHECK_THROWS_AS(vertex_apply(1, tau, c, ctx, 4), Error);
}

TEST_CASE("algebra action")
{
    const int n = 4;
    const auto ctx = SeriesContext::make(n, 8);
    const auto &c = coefficients(n);
    std::mt19937_64 rng(53);
    const auto tau = small_tau(ctx, rng);

    const auto t1 = TruncatedSeries::variable(ctx.t_space, Family::t, ex(n, 1));
    CHECK(max_abs_difference(algebra_action(Generator::degree(), t1, c, ctx), t1 * Complex(-1.0)) == 0.0);
    CHECK(max_abs_difference(algebra_action(Generator::central(), tau, c, ctx), tau) == 0.0);

    for (const auto &e : exponents_up_to(n, 5)) {
        const auto hp = Generator::h_pos(e);
        const auto hn = Generator::h_neg(e);
        const auto comm = algebra_action(hp, algebra_action(hn, tau, c, ctx), c, ctx) -
                          algebra_action(hn, algebra_action(hp, tau, c, ctx), c, ctx);
        CHECK(relative(comm.truncated(8 - e.value), (tau * Complex(e.value)).truncated(8 - e.value)) < 1e-13);

        // [H_j, X_m] = beta_j X_{m+j}
        for (int r = 1; r <= n; ++r)
            for (int m = -5; m <= 2; ++m) {
                if (std::abs(m + e.value) > 8)
                    continue;
                const auto xm = Generator::x_mode(r, m);
                const auto lhs = algebra_action(hp, algebra_action(xm, tau, c, ctx), c, ctx) -
                                 algebra_action(xm, algebra_action(hp, tau, c, ctx), c, ctx);
                const auto rhs = algebra_action(Generator::x_mode(r, m + e.value), tau, c, ctx) *
                                 c.beta_at(r, e.label);
                CHECK(relative(lhs.truncated(8 - e.value), rhs.truncated(8 - e.value)) < 1e-12);
            }
    }

    CHECK_THROWS_AS(algebra_action(Generator::x_mode(1, 0), tau, closed_coefficients(n), ctx), Error);
    CHECK_THROWS_AS(algebra_action(Generator::x_mode(0, 0), tau, c, ctx), Error);
    CHECK_THROWS_AS(algebra_action(Generator::x_mode(1, 9), tau, c, ctx), Error);
    CHECK(to_string(Generator::y_mode(2, 3)) == "Y^(2)_-3");
    CHECK(to_string(Generator::h_neg(ex(n, 3, true))) == "H_-3p");
}

TEST_CASE("infinitesimal orbit invariance")
{
    for (int n : {4, 5}) {
        CAPTURE(n);
        const auto ctx = SeriesContext::make(n, 8);
        const auto &c = coefficients(n);
        const auto plus = orbit_infinitesimal_check(Generator::h_pos(ex(n, 1)), 2, c, ctx);
        CHECK(plus.order1 == 0.0);
        CHECK(plus.order2 == 0.0);
        for (const auto &e : exponents_up_to(n, 5)) {
            const auto rep = orbit_infinitesimal_check(Generator::h_neg(e), 2, c, ctx);
            CHECK(rep.order1 < 1e-8);
            CHECK(rep.order2 < 1e-8);
        }
        for (int r = 1; r <= n; ++r)
            for (int m = -2; m <= 2; ++m) {
                CHECK(orbit_infinitesimal_check(Generator::x_mode(r, m), 2, c, ctx).order2 < 1e-8);
                CHECK(orbit_infinitesimal_check(Generator::y_mode(r, m), 2, c, ctx).order2 < 1e-8);
            }
        CHECK_THROWS_AS(orbit_infinitesimal_check(Generator::central(), 1, c, ctx), Error);
        CHECK_THROWS_AS(orbit_infinitesimal_check(Generator::degree(), 1, c, ctx), Error);
        CHECK_THROWS_AS(orbit_infinitesimal_check(Generator::h_neg(ex(n, 1)), 3, c, ctx), Error);
    }
}

TEST_CASE("emitted equations")
{
    for (int n : {4, 5}) {
        CAPTURE(n);
        const int h = 2 * n - 2;
        const auto &c = coefficients(n);
        const auto eqs = equations_emit(c, 4);

        // every y-monomial of weight <= 4, lightest first
        const auto ctx4 = SeriesContext::make(n, 4);
        std::size_t expected = 0;
        std::function<void(std::size_t, int)> count = [&](std::size_t i, int w) {
            const auto es = exponents_up_to(n, 4);
            if (i == es.size()) {
                ++expected;
                return;
            }
            for (int a = 0; w + a * es[i].value <= 4; ++a)
                count(i + 1, w + a * es[i].value);
        };
        count(0, 0);
        CHECK(eqs.size() == expected);
        for (std::size_t i = 1; i < eqs.size(); ++i)
            CHECK(monomial_weight(eqs[i - 1].y_monomial) <= monomial_weight(eqs[i].y_monomial));

        REQUIRE(eqs[0].y_monomial.empty());
        CHECK(eqs[0].trivial);
        CHECK(eqs[0].d_polynomial.empty());

        // y_1 by hand: -2h D_1 from the Euler part, -2 sum_r g_r beta_{r,1} beta_{r,h-1} D_1 from S_1 S_1
        REQUIRE(monomial_string(eqs[1].y_monomial, "y") == "y_1");
        Complex want = -2.0 * h;
        for (int r = 1; r <= n; ++r)
            want -= 2.0 * c.g[r] * c.beta_at(r, {1, false}) * c.beta_at(r, {h - 1, false});
        REQUIRE(eqs[1].d_polynomial.size() == 1);
        CHECK(monomial_string(eqs[1].d_polynomial[0].monomial, "D") == "D_1");
        CHECK(std::abs(eqs[1].d_polynomial[0].coefficient - want) < 1e-10);
        CHECK(eqs[1].trivial);
        if (n == 4)
            CHECK(std::abs(want + 72.0) < 1e-10);
    }
    CHECK_THROWS_AS(equations_emit(coefficients(4), -1), Error);
}

TEST_CASE("nontrivial equations vanish on orbit points")
{
    const int n = 4;
    const auto ctx = SeriesContext::make(n, 8);
    const auto &c = coefficients(n);
    const auto eqs = equations_emit(c, 8);
    int nontrivial = 0;
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    std::vector<std::pair<Exponent, Complex>> lin;
    for (const auto &e : exponents_up_to(n, 3))
        lin.emplace_back(e, Complex(u(rng), u(rng)));
    const auto exp_t1 = exp_linear_tau(ctx, {{ex(n, 1), Complex(0.9)}});
    const auto tau = exp_linear_tau(ctx, lin);
    const auto generic = random_tau(ctx, 8, rng);
    bool generic_fails = false;
    for (const auto &eq : eqs) {
        if (eq.trivial)
            continue;
        ++nontrivial;
        CHECK(apply_equation(eq, exp_t1, exp_t1, ctx).max_abs() < 1e-8);
        CHECK(apply_equation(eq, tau, tau, ctx).max_abs() < 1e-8);
        if (apply_equation(eq, generic, generic, ctx).max_abs() > 1e-3)
            generic_fails = true;
    }
    CHECK(nontrivial > 0);
    CHECK(generic_fails);
}

TEST_CASE("emission agrees with evaluation")
{
    std::mt19937_64 rng(61);
    for (int n : {4, 5}) {
        CAPTURE(n);
        const int big_n = 7;
        const int y_degree = 5;
        const auto ctx = SeriesContext::make(n, big_n);
        const auto &c = coefficients(n);
        const auto eqs = equations_emit(c, y_degree);
        for (int k = 0; k < 3; ++k) {
            const auto tau1 = random_tau(ctx, big_n, rng);
            const auto tau2 = random_tau(ctx, big_n, rng);
            const auto kw = kw_lhs(tau1, tau2, c, ctx);
            // residue form plus the constant rearrangement gives the Schur form back
            const auto gm = gm_residual(tau1, tau2, c, ctx) -
                            bilinear_pair(tau1, tau2, ctx) * (c.g_sum() - g_sum_target(n));
            for (const auto &eq : eqs) {
                const int bound = big_n - monomial_weight(eq.y_monomial);
                const auto applied = apply_equation(eq, tau1, tau2, ctx);
                CHECK(relative(family_coefficient(kw, Family::y, eq.y_monomial, ctx.t_space).truncated(bound),
                               applied) < 1e-11);
                CHECK(relative(family_coefficient(gm, Family::y, eq.y_monomial, ctx.t_space).truncated(bound),
                               applied) < 1e-11);
            }
        }
    }
}
