#ifndef DNKW_VERIFY_HPP
#define DNKW_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <dnkw/hirota.hpp>

namespace dnkw
{

struct CheckResult
{
    std::string suite;
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double seconds = 0.0;
};

struct VerifyConfig
{
    int n = 4;
    int degree = 8;
    double tolerance = 1e-8;
    std::uint64_t seed = 42;
    int random_pairs = 20;
    /// Added to the extracted beta_{1,1}; test-only.
    double inject_beta_error = 0.0;
};

struct VerificationReport
{
    VerifyConfig config;
    std::vector<CheckResult> checks;

    bool passed() const;
};

// Each suite returns its checks; a check passes iff residual <= tol.

std::vector<CheckResult> matrix_algebra_suite(int n, double tol);

std::vector<CheckResult> heisenberg_suite(int n, double tol);

/// Extracted versus closed-form beta and g, and the g-sum identity.
std::vector<CheckResult> coefficient_suite(const HierarchyCoefficients &extracted, double tol);

/// Schur route with `kw` coefficients against the residue route with `gm` coefficients
/// on seeded random tau pairs, plus odd annihilation.
std::vector<CheckResult> evaluator_suite(const SeriesContext &ctx, const HierarchyCoefficients &kw,
                                         const HierarchyCoefficients &gm, std::uint64_t seed, int pairs, double tol);

/// Vacuum, Heisenberg-orbit and infinitesimal-orbit checks. coeffs must carry rho pairings.
std::vector<CheckResult> tau_suite(const SeriesContext &ctx, const HierarchyCoefficients &coeffs, std::uint64_t seed,
                                   double tol);

/// All suites in order.
VerificationReport run_verification(const VerifyConfig &config);

} // namespace dnkw

#endif
