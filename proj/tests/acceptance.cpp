// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include <dnkw/cli.hpp>
#include <dnkw/verify.hpp>

using namespace dnkw;

namespace
{

constexpr double coefficient_tol = 1e-9;
constexpr double structure_tol = 1e-9;
constexpr double evaluator_tol = 1e-8;
constexpr double tau_tol = 1e-8;
constexpr double limit_coefficients_s = 5.0;
constexpr double limit_structure_s = 30.0;
constexpr double limit_evaluators_s = 60.0;
constexpr double limit_tau_s = 120.0;
constexpr double no_limit = 1e30;
constexpr int truncation = 8;
constexpr int random_pairs = 20;
constexpr std::uint64_t seed = 20240607;
constexpr double injected_error = 1e-2;

const double pi = std::acos(-1.0);

struct Outcome
{
    bool passed;
    double residual;
    double seconds;
};

Outcome measure(const std::function<double()> &body, double tol, double limit)
{
    const auto start = std::chrono::steady_clock::now();
    const double r = body();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::isfinite(r) && r <= tol && s <= limit, r, s};
}

// Closed forms evaluated from scratch with real trigonometry.
Complex beta_oracle(int n, int r, const ExponentLabel &label)
{
    const int h = 2 * n - 2;
    if (label.primed)
        return r == n - 1 ? std::sqrt(2.0 * n - 2) : r == n ? -std::sqrt(2.0 * n - 2) : 0.0;
    if (r >= n - 1)
        return std::sqrt(2.0);
    const double theta = 2 * pi * r * label.value / h;
    return std::sqrt(2.0) * Complex(1 + std::cos(theta), std::sin(theta));
}

double g_oracle(int n, int r)
{
    if (r >= n - 1)
        return (n - 1.0) * (n - 1.0) / 2;
    const double c = std::cos(2 * pi * r / (2 * n - 2));
    return (n - 1.0) / 2 * (1 - c) / (1 + c);
}

void report(int id, const std::string &what, const Outcome &o, double tol, double limit)
{
    std::printf("criterion %d [%s] %s: residual %.3e (tol %.0e), %.2f s", id, o.passed ? "PASS" : "FAIL", what.c_str(),
                o.residual, tol, o.seconds);
    if (limit < no_limit)
        std::printf(" (limit %.0f s)", limit);
    std::printf("\n");
}

Outcome beta_criterion(double inject)
{
    return measure(
        [&] {
            double r = 0.0;
            for (int n = 3; n <= 8; ++n) {
                const auto bases = dual_bases(n);
                for (int p = 1; p <= n; ++p)
                    for (const auto &label : exponent_labels(n)) {
                        Complex b = beta_extract(p, label, bases, coefficient_tol);
                        if (p == 1 && label == ExponentLabel{1, false})
                            b += inject;
                        r = std::max(r, std::abs(b - beta_oracle(n, p, label)));
                    }
            }
            return r;
        },
        coefficient_tol, limit_coefficients_s);
}

Outcome evaluator_criterion(double inject)
{
    return measure(
        [&] {
            double r = 0.0;
            for (int n : {4, 5}) {
                auto kw = extract_coefficients(n);
                kw.beta[1][ExponentLabel{1, false}] += inject;
                const auto ctx = SeriesContext::make(n, truncation);
                const auto checks = evaluator_suite(ctx, kw, closed_coefficients(n), seed, random_pairs, evaluator_tol);
                r = std::max(r, checks.front().residual);
            }
            return r;
        },
        evaluator_tol, limit_evaluators_s);
}

} // namespace

int main()
{
    bool all = true;

    const auto c1 = beta_criterion(0.0);
    report(1, "beta extracted vs closed form, n=3..8", c1, coefficient_tol, limit_coefficients_s);
    all &= c1.passed;

    const auto c2 = measure(
        [] {
            double r = 0.0;
            for (int n = 3; n <= 8; ++n) {
                const auto bases = cached_dual_bases(n);
                for (int p = 1; p <= n; ++p) {
                    r = std::max(r, std::abs(g_extract(p, *bases) - g_closed(n, p)));
                    r = std::max(r, std::abs(g_extract(p, *bases) - g_oracle(n, p)));
                }
            }
            const double s2 = std::sqrt(2.0);
            const double g4[] = {0.5, 4.5, 4.5, 4.5};
            const double g5[] = {6 - 4 * s2, 2, 6 + 4 * s2, 8, 8};
            for (int p = 1; p <= 4; ++p)
                r = std::max(r, std::abs(g_extract(p, *cached_dual_bases(4)) - g4[p - 1]));
            for (int p = 1; p <= 5; ++p)
                r = std::max(r, std::abs(g_extract(p, *cached_dual_bases(5)) - g5[p - 1]));
            return r;
        },
        coefficient_tol, no_limit);
    report(2, "g extracted vs closed form and reference values, n=3..8", c2, coefficient_tol, no_limit);
    all &= c2.passed;

    const auto c3 = measure(
        [] {
            double r = 0.0;
            for (int n = 3; n <= 8; ++n) {
                const auto bases = cached_dual_bases(n);
                Complex sum = 0.0;
                for (int p = 1; p <= n; ++p)
                    sum += g_extract(p, *bases);
                const double h = 2.0 * n - 2;
                r = std::max(r, std::abs(sum - n * h * (h + 1) / 12));
            }
            return r;
        },
        coefficient_tol, no_limit);
    report(3, "sum of g equals n h (h+1)/12, n=3..8", c3, coefficient_tol, no_limit);
    all &= c3.passed;

    const auto c4 = measure(
        [] {
            double r = 0.0;
            for (int n = 3; n <= 8; ++n) {
                for (const auto &c : matrix_algebra_suite(n, structure_tol))
                    r = std::max(r, c.residual);
                for (const auto &c : heisenberg_suite(n, structure_tol))
                    r = std::max(r, c.residual);
            }
            return r;
        },
        structure_tol, limit_structure_s);
    report(4, "structure suites (Weyl, pairings, duality, grading), n=3..8", c4, structure_tol, limit_structure_s);
    all &= c4.passed;

    const auto c5 = evaluator_criterion(0.0);
    report(5, "Schur vs residue evaluators, 20 random pairs, N=8, n=4,5", c5, evaluator_tol, limit_evaluators_s);
    all &= c5.passed;

    const auto c6 = measure(
        [] {
            double r = 0.0;
            for (int n : {4, 5}) {
                const auto ctx = SeriesContext::make(n, truncation);
                for (const auto &c : tau_suite(ctx, extract_coefficients(n), seed, tau_tol))
                    r = std::max(r, c.residual);
            }
            return r;
        },
        tau_tol, limit_tau_s);
    report(6, "vacuum, Heisenberg orbit and infinitesimal orbit checks, N=8, n=4,5", c6, tau_tol, limit_tau_s);
    all &= c6.passed;

    // Negative control: the perturbation must be caught by criteria 1 and 5 and by the CLI.
    const auto start = std::chrono::steady_clock::now();
    const auto b1 = beta_criterion(injected_error);
    const auto b5 = evaluator_criterion(injected_error);
    std::ostringstream sink;
    const std::string err_arg = std::to_string(injected_error);
    const char *argv[] = {"dnkw", "verify", "--n", "4", "--degree", "8", "--inject-beta-error", err_arg.c_str()};
    const int code = run_cli(8, argv, sink, sink);
    const double s7 = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool c7 = !b1.passed && !b5.passed && code == 1;
    std::printf("criterion 7 [%s] beta perturbed by %.0e: criterion 1 %s (residual %.3e), criterion 5 %s "
                "(residual %.3e), verify exit %d, %.2f s\n",
                c7 ? "PASS" : "FAIL", injected_error, b1.passed ? "passes" : "fails", b1.residual,
                b5.passed ? "passes" : "fails", b5.residual, code, s7);
    all &= c7;

    std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}
