#include <dnkw/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace dnkw
{

bool VerificationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

namespace
{

using Clock = std::chrono::steady_clock;

/// Runs body (which returns a residual) and records it under suite/name.
CheckResult timed(const std::string &suite, const std::string &name, double tol, const std::function<double()> &body)
{
    const auto start = Clock::now();
    CheckResult out;
    out.suite = suite;
    out.name = name;
    out.tolerance = tol;
    try {
        out.residual = body();
    } catch (const Error &) {
        out.residual = std::numeric_limits<double>::infinity();
    }
    out.passed = std::isfinite(out.residual) && out.residual <= tol;
    out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
}

double relative(const SquareMatrix &got, const SquareMatrix &want)
{
    return (got - want).max_norm() / std::max({1.0, got.max_norm(), want.max_norm()});
}

double relative(const TruncatedSeries &a, const TruncatedSeries &b)
{
    const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
    return max_abs_difference(a, b) / scale;
}

int wrap(int m, int h)
{
    return ((m % h) + h) % h;
}

} // namespace

std::vector<CheckResult> matrix_algebra_suite(int n, double tol)
{
    const std::string suite = "matrix_algebra";
    const AlgebraConfig config(n);
    const auto weyl = weyl_generators(n);
    const auto cartan = affine_cartan_matrix(n);
    const int dim = config.dim();

    std::vector<CheckResult> out;
    out.push_back(timed(suite, "weyl_relations", tol, [&] {
        double r = 0.0;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const SquareMatrix want = i == j ? weyl.h[i] : SquareMatrix(dim);
                r = std::max(r, relative(commutator(weyl.e[i], weyl.f[j]), want));
                r = std::max(r, relative(commutator(weyl.h[i], weyl.e[j]), weyl.e[j] * Complex(cartan(i, j))));
                r = std::max(r, relative(commutator(weyl.h[i], weyl.f[j]), weyl.f[j] * Complex(-cartan(i, j))));
            }
        return r;
    }));
    out.push_back(timed(suite, "killing_normalization", tol, [&] {
        double r = 0.0;
        for (int i = 0; i <= n; ++i)
            r = std::max(r, std::abs(killing_form(weyl.e[i], weyl.f[i]) - 1.0));
        return r;
    }));
    out.push_back(timed(suite, "membership", tol, [&] {
        const auto s = build_involution_matrix(n);
        double r = 0.0;
        for (const auto *family : {&weyl.e, &weyl.f, &weyl.h})
            for (const auto &a : *family)
                r = std::max(r, (a + s * anti_transpose(a) * s).max_norm());
        return r;
    }));
    out.push_back(timed(suite, "principal_grading", tol, [&] {
        const auto grading = grading_element(n);
        double r = 0.0;
        for (int i = 1; i <= n; ++i) {
            r = std::max(r, relative(commutator(grading.rho_vee, weyl.e[i]), weyl.e[i]));
            r = std::max(r, relative(commutator(grading.rho_vee, weyl.f[i]), -weyl.f[i]));
        }
        r = std::max(r, relative(commutator(grading.rho_vee, weyl.e[0]), weyl.e[0] * Complex(1.0 - config.h())));
        return r;
    }));
    return out;
}

std::vector<CheckResult> heisenberg_suite(int n, double tol)
{
    const std::string suite = "heisenberg";
    const auto bases_ptr = cached_dual_bases(n);
    const auto &bases = *bases_ptr;
    const int h = bases.h;
    const auto labels = exponent_labels(n);
    const double sqrt2 = std::sqrt(2.0);

    std::vector<CheckResult> out;
    out.push_back(timed(suite, "heisenberg_abelian", tol, [&] {
        double r = 0.0;
        for (const auto &[a, ta] : bases.heisenberg)
            for (const auto &[b, tb] : bases.heisenberg)
                r = std::max(r, commutator(ta, tb).max_norm());
        return r;
    }));
    out.push_back(timed(suite, "heisenberg_pairing", tol, [&] {
        double r = 0.0;
        for (const auto &i : labels)
            for (const auto &j : labels) {
                const Complex want = i == j ? Complex(n - 1.0) : Complex(0.0);
                r = std::max(r, std::abs(killing_form(bases.heisenberg.at(i),
                                                      bases.heisenberg.at(negate_label(n, j))) - want));
            }
        return r;
    }));
    out.push_back(timed(suite, "eigenvectors", tol, [&] {
        const auto lambda = cyclic_element(n);
        double r = 0.0;
        for (int s = 0; s < h; ++s) {
            const auto tag = EigenvalueTag::root(s);
            const ColumnVector v = eta(n, tag);
            r = std::max(r, (lambda * v - eigenvalue(tag, h) * v).cwiseAbs().maxCoeff());
        }
        for (const auto &tag : {EigenvalueTag::zero(), EigenvalueTag::zero_prime()}) {
            const ColumnVector v = eta(n, tag);
            r = std::max(r, (lambda * v).cwiseAbs().maxCoeff());
            const double sign = (tag.kind == EigenvalueTag::Kind::zero) == (n % 2 == 0) ? -1.0 : 1.0;
            const ExponentLabel primed{n - 1, true};
            const Complex want = sign * std::sqrt(n - 1.0);
            r = std::max(r, (bases.heisenberg.at(primed) * v - want * v).cwiseAbs().maxCoeff());
        }
        return r;
    }));
    out.push_back(timed(suite, "root_matrix_pairings", tol, [&] {
        const auto &g = bases.grading;
        const auto one = EigenvalueTag::root(0);
        const auto minus_one = EigenvalueTag::root(h / 2);
        const std::vector<EigenvalueTag> kernel{EigenvalueTag::zero(), EigenvalueTag::zero_prime()};
        auto a0 = [&](const EigenvalueTag &x, const EigenvalueTag &y) {
            return cyclic_component(root_matrix(n, x, y), 0, g);
        };
        double r = 0.0;
        for (int p = 1; p <= n - 2; ++p) {
            const auto left = a0(one, EigenvalueTag::root(p));
            for (int q = 1; q <= n - 2; ++q) {
                const auto right = a0(minus_one, EigenvalueTag::root(wrap(q + h / 2, h)));
                const Complex want = p == q ? Complex(-h) : Complex(0.0);
                r = std::max(r, std::abs(killing_form(left, right) - want));
            }
            for (const auto &k : kernel)
                r = std::max(r, std::abs(killing_form(left, a0(minus_one, k))));
        }
        for (const auto &a : kernel)
            for (const auto &b : kernel) {
                const Complex want = a == b ? Complex(0.0) : Complex(2.0);
                r = std::max(r, std::abs(killing_form(a0(one, a), a0(minus_one, b)) - want));
            }
        return r;
    }));
    out.push_back(timed(suite, "dual_basis_duality", tol, [&] {
        double r = 0.0;
        for (int p = 1; p <= n; ++p)
            for (int q = 1; q <= n; ++q)
                for (int l = 0; l < h; ++l)
                    for (int m = 0; m < h; ++m) {
                        const Complex want = p == q && l == m ? Complex(1.0) : Complex(0.0);
                        r = std::max(r, std::abs(killing_form(bases.x_at(p, l), bases.y_at(q, -m)) - want));
                    }
        return r;
    }));
    out.push_back(timed(suite, "commutator_grading", tol, [&] {
        double r = 0.0;
        for (int p = 1; p <= n; ++p)
            for (const auto &label : labels) {
                const auto t = bases.heisenberg.at(label) * Complex(sqrt2);
                const Complex beta = beta_closed(n, p, label);
                for (int m = 0; m < h; ++m) {
                    r = std::max(r, relative(commutator(t, bases.x_at(p, m)), bases.x_at(p, m + label.value) * beta));
                    r = std::max(r,
                                 relative(commutator(t, bases.y_at(p, -m)), bases.y_at(p, -m + label.value) * -beta));
                }
            }
        return r;
    }));
    return out;
}

std::vector<CheckResult> coefficient_suite(const HierarchyCoefficients &extracted, double tol)
{
    const std::string suite = "coefficients";
    const int n = extracted.n;
    std::vector<CheckResult> out;
    out.push_back(timed(suite, "beta_cross_check", tol, [&] {
        double r = 0.0;
        for (int p = 1; p <= n; ++p)
            for (const auto &label : exponent_labels(n))
                r = std::max(r, std::abs(extracted.beta_at(p, label) - beta_closed(n, p, label)));
        return r;
    }));
    out.push_back(timed(suite, "g_cross_check", tol, [&] {
        double r = 0.0;
        for (int p = 1; p <= n; ++p)
            r = std::max(r, std::abs(extracted.g[p] - g_closed(n, p)));
        return r;
    }));
    out.push_back(timed(suite, "g_sum_identity", tol, [&] { return std::abs(extracted.g_sum() - g_sum_target(n)); }));
    return out;
}

std::vector<CheckResult> evaluator_suite(const SeriesContext &ctx, const HierarchyCoefficients &kw,
                                         const HierarchyCoefficients &gm, std::uint64_t seed, int pairs, double tol)
{
    const std::string suite = "evaluators";
    std::vector<CheckResult> out;
    out.push_back(timed(suite, "evaluator_equivalence", tol, [&] {
        std::mt19937_64 rng(seed);
        double r = 0.0;
        for (int k = 0; k < pairs; ++k) {
            const auto tau1 = random_tau(ctx, ctx.degree, rng);
            const auto tau2 = random_tau(ctx, ctx.degree, rng);
            r = std::max(r, relative(kw_lhs(tau1, tau2, kw, ctx), gm_residual(tau1, tau2, gm, ctx)));
        }
        return r;
    }));
    out.push_back(timed(suite, "odd_annihilation", tol, [&] {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        const auto f = random_tau(ctx, ctx.degree, rng);
        double r = 0.0;
        for (const auto &e : exponents_up_to(ctx.n, ctx.degree))
            r = std::max(r, hirota_apply({e}, f, f, ctx).max_abs() / std::max(1.0, f.max_abs()));
        return r;
    }));
    return out;
}

std::vector<CheckResult> tau_suite(const SeriesContext &ctx, const HierarchyCoefficients &coeffs, std::uint64_t seed,
                                   double tol)
{
    const std::string suite = "tau";
    const auto one = TruncatedSeries::constant(ctx.t_space, 1.0);
    std::vector<CheckResult> out;
    out.push_back(timed(suite, "vacuum", tol, [&] { return gm_residual(one, one, coeffs, ctx).max_abs(); }));
    out.push_back(timed(suite, "heisenberg_orbit", tol, [&] {
        std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
        std::uniform_real_distribution<double> radius(0.0, 0.5), angle(0.0, 2.0 * std::acos(-1.0));
        double r = 0.0;
        for (int k = 0; k < 3; ++k) {
            std::vector<std::pair<Exponent, Complex>> c;
            for (const auto &e : exponents_up_to(ctx.n, std::min(3, ctx.degree)))
                c.emplace_back(e, std::polar(radius(rng), angle(rng)));
            const auto tau = exp_linear_tau(ctx, c);
            const auto parts = gm_parts(tau, tau, coeffs, ctx);
            r = std::max(r, relative(parts.lhs, parts.rhs));
        }
        return r;
    }));
    out.push_back(timed(suite, "orbit_heisenberg_modes", tol, [&] {
        double r = 0.0;
        for (const auto &e : exponents_up_to(ctx.n, std::min(5, ctx.degree))) {
            const auto rep = orbit_infinitesimal_check(Generator::h_neg(e), 2, coeffs, ctx);
            r = std::max({r, rep.order1, rep.order2});
        }
        return r;
    }));
    out.push_back(timed(suite, "orbit_vertex_modes", tol, [&] {
        double r = 0.0;
        for (int p = 1; p <= ctx.n; ++p)
            for (int m = -2; m <= 2; ++m) {
                const auto rep = orbit_infinitesimal_check(Generator::x_mode(p, m), 2, coeffs, ctx);
                r = std::max({r, rep.order1, rep.order2});
            }
        return r;
    }));
    return out;
}

VerificationReport run_verification(const VerifyConfig &config)
{
    VerificationReport report;
    report.config = config;
    auto append = [&](std::vector<CheckResult> checks) {
        for (auto &c : checks)
            report.checks.push_back(std::move(c));
    };
    const int n = config.n;
    const double tol = config.tolerance;

    append(matrix_algebra_suite(n, tol));
    append(heisenberg_suite(n, tol));

    const auto clean = extract_coefficients(n);
    auto extracted = clean;
    if (config.inject_beta_error != 0.0)
        extracted.beta[1][ExponentLabel{1, false}] += config.inject_beta_error;
    append(coefficient_suite(extracted, tol));

    const auto ctx = SeriesContext::make(n, config.degree);
    const auto closed = closed_coefficients(n);
    append(evaluator_suite(ctx, extracted, closed, config.seed, config.random_pairs, tol));
    append(tau_suite(ctx, clean, config.seed, tol));
    return report;
}

} // namespace dnkw
