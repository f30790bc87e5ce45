#include <dnkw/principal_heisenberg.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace dnkw
{

namespace
{

int mod(int a, int h)
{
    return ((a % h) + h) % h;
}

void require_rank(int n)
{
    if (n < 3)
        throw Error(ErrorCode::rank_too_small, "D_n requires n >= 3, got " + std::to_string(n));
}

void require_r(int n, int r)
{
    if (r < 1 || r > n)
        throw Error(ErrorCode::out_of_range, "r must lie in 1..n, got " + std::to_string(r));
}

void require_label(int n, const ExponentLabel &label)
{
    if (!is_valid_label(n, label))
        throw Error(ErrorCode::invalid_tag, "invalid exponent label " + to_string(label) + " for n = " + std::to_string(n));
}

// Position of the largest |entry|, 1-based.
std::pair<int, int> argmax_entry(const SquareMatrix &m)
{
    std::pair<int, int> best{1, 1};
    double best_abs = -1.0;
    for (int i = 1; i <= m.dim(); ++i)
        for (int j = 1; j <= m.dim(); ++j)
            if (std::abs(m(i, j)) > best_abs) {
                best_abs = std::abs(m(i, j));
                best = {i, j};
            }
    return best;
}

// c with image = c * target, or throws.
Complex proportionality(const SquareMatrix &image, const SquareMatrix &target, double eps, const std::string &what)
{
    const double scale = std::max({1.0, image.max_norm(), target.max_norm()});
    if (target.max_norm() <= eps * scale)
        throw Error(ErrorCode::proportionality_failure, what + ": target component vanishes");
    const auto [i, j] = argmax_entry(target);
    const Complex c = image(i, j) / target(i, j);
    if ((image - c * target).max_norm() > eps * scale)
        throw Error(ErrorCode::proportionality_failure, what + ": commutator is not a multiple of the target");
    return c;
}

} // namespace

std::string to_string(const ExponentLabel &label)
{
    return std::to_string(label.value) + (label.primed ? "p" : "");
}

std::vector<ExponentLabel> exponent_labels(int n)
{
    require_rank(n);
    std::vector<ExponentLabel> out;
    for (int v = 1; v <= 2 * n - 3; v += 2)
        out.push_back({v, false});
    out.push_back({n - 1, true});
    std::sort(out.begin(), out.end());
    return out;
}

bool is_valid_label(int n, const ExponentLabel &label)
{
    if (label.primed)
        return label.value == n - 1;
    return label.value >= 1 && label.value <= 2 * n - 3 && label.value % 2 == 1;
}

ExponentLabel negate_label(int n, const ExponentLabel &label)
{
    require_label(n, label);
    if (label.primed)
        return label;
    return {2 * n - 2 - label.value, false};
}

EigenvalueTag negate(const EigenvalueTag &tag, int h)
{
    if (tag.kind != EigenvalueTag::Kind::root)
        return tag;
    return EigenvalueTag::root(mod(tag.s + h / 2, h));
}

Complex primitive_root(int h)
{
    return std::polar(1.0, 2.0 * std::numbers::pi / h);
}

Complex eigenvalue(const EigenvalueTag &tag, int h)
{
    if (tag.kind != EigenvalueTag::Kind::root)
        return 0.0;
    return std::polar(1.0, 2.0 * std::numbers::pi * mod(tag.s, h) / h);
}

Complex kappa(int n)
{
    return n % 2 == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
}

SquareMatrix cyclic_element(int n)
{
    const auto w = weyl_generators(n);
    SquareMatrix lambda(2 * n);
    for (const auto &e : w.e)
        lambda += e;
    return lambda;
}

std::map<ExponentLabel, SquareMatrix> heisenberg_basis(int n)
{
    const int d = 2 * n;
    const auto lambda = cyclic_element(n);
    std::map<ExponentLabel, SquareMatrix> t;

    auto lambda_pow = SquareMatrix::identity(d);
    for (int v = 1; v <= 2 * n - 3; ++v) {
        lambda_pow = lambda_pow * lambda;
        if (v % 2 == 1)
            t[{v, false}] = lambda_pow;
    }

    auto u = [d](int i, int j) { return SquareMatrix::unit(d, i, j); };
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    SquareMatrix inner = u(n, 1) - 0.5 * u(n + 1, 1) - 0.5 * u(n, d) + 0.25 * u(n + 1, d) +
                         sign * (u(d, n + 1) - 0.5 * u(d, n) - 0.5 * u(1, n + 1) + 0.25 * u(1, n));
    t[{n - 1, true}] = std::sqrt(static_cast<double>(n - 1)) * kappa(n) * inner;
    return t;
}

ColumnVector eta(int n, const EigenvalueTag &tag)
{
    require_rank(n);
    const int d = 2 * n;
    const int h = d - 2;
    ColumnVector v = ColumnVector::Zero(d);
    switch (tag.kind) {
    case EigenvalueTag::Kind::root: {
        if (tag.s < 0 || tag.s >= h)
            throw Error(ErrorCode::invalid_tag, "root tag exponent must lie in 0..h-1");
        const Complex w = eigenvalue(tag, h);
        // (1/2, w^-1, ..., w^-(n-1), w^(n-1)/2, w^(n-2), ..., w, 1)
        v(0) = 0.5;
        for (int k = 1; k <= n - 1; ++k)
            v(k) = std::pow(w, -k);
        v(n) = 0.5 * std::pow(w, n - 1);
        for (int k = 1; k <= n - 1; ++k)
            v(n + k) = std::pow(w, n - 1 - k);
        return v;
    }
    case EigenvalueTag::Kind::zero:
    case EigenvalueTag::Kind::zero_prime: {
        const Complex sign = tag.kind == EigenvalueTag::Kind::zero ? 1.0 : -1.0;
        const Complex kinv = 1.0 / kappa(n);
        v(0) = -0.5;
        v(d - 1) = 1.0;
        v(n - 1) += sign * kinv;
        v(n) += -0.5 * sign * kinv;
        return v;
    }
    }
    throw Error(ErrorCode::invalid_tag, "unknown eigenvalue tag");
}

SquareMatrix root_matrix(int n, const EigenvalueTag &alpha, const EigenvalueTag &beta)
{
    const int h = 2 * n - 2;
    const ColumnVector left = eta(n, alpha);
    const Eigen::RowVectorXcd right = anti_transpose(eta(n, negate(beta, h)));
    return sigma(SquareMatrix(Eigen::MatrixXcd(left * right)));
}

const SquareMatrix &DualBases::x_at(int r, int m) const
{
    require_r(n, r);
    return x[r][mod(m, h)];
}

const SquareMatrix &DualBases::y_at(int r, int m) const
{
    require_r(n, r);
    return y[r][mod(m, h)];
}

DualBases DualBases::rescaled(const std::vector<Complex> &c) const
{
    if (static_cast<int>(c.size()) != n + 1)
        throw Error(ErrorCode::dimension_mismatch, "rescaling needs one factor per r (index from 1)");
    DualBases out = *this;
    for (int r = 1; r <= n; ++r)
        for (int m = 0; m < h; ++m) {
            out.x[r][m] *= c[r];
            out.y[r][m] *= 1.0 / c[r];
        }
    return out;
}

DualBases dual_bases(int n)
{
    require_rank(n);
    const int h = 2 * n - 2;
    DualBases b;
    b.n = n;
    b.h = h;
    b.grading = grading_element(n);
    b.heisenberg = heisenberg_basis(n);
    b.x.assign(n + 1, {});
    b.y.assign(n + 1, {});

    const auto one = EigenvalueTag::root(0);
    const auto minus_one = EigenvalueTag::root(h / 2);
    const double inv_sqrt_h = 1.0 / std::sqrt(static_cast<double>(h));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    for (int r = 1; r <= n; ++r) {
        SquareMatrix ax, ay;
        if (r <= n - 2) {
            ax = inv_sqrt_h * root_matrix(n, one, EigenvalueTag::root(r));
            ay = -inv_sqrt_h * root_matrix(n, minus_one, EigenvalueTag::root(mod(r + h / 2, h)));
        } else if (r == n - 1) {
            ax = inv_sqrt2 * root_matrix(n, one, EigenvalueTag::zero());
            ay = inv_sqrt2 * root_matrix(n, minus_one, EigenvalueTag::zero_prime());
        } else {
            ax = inv_sqrt2 * root_matrix(n, one, EigenvalueTag::zero_prime());
            ay = inv_sqrt2 * root_matrix(n, minus_one, EigenvalueTag::zero());
        }
        for (int m = 0; m < h; ++m) {
            b.x[r].push_back(cyclic_component(ax, m, b.grading));
            b.y[r].push_back(cyclic_component(ay, m, b.grading));
        }
    }
    return b;
}

std::shared_ptr<const DualBases> cached_dual_bases(int n)
{
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const DualBases>> cache;
    std::lock_guard lock(mutex);
    auto &slot = cache[n];
    if (!slot)
        slot = std::make_shared<const DualBases>(dual_bases(n));
    return slot;
}

Complex beta_extract(int r, const ExponentLabel &label, const DualBases &bases, double eps)
{
    require_r(bases.n, r);
    require_label(bases.n, label);
    const SquareMatrix &t = bases.heisenberg.at(label);
    const double sqrt2 = std::sqrt(2.0);
    const int j = label.value;

    const SquareMatrix cx = sqrt2 * commutator(t, bases.x_at(r, 0));
    const Complex beta = proportionality(cx, bases.x_at(r, j), eps, "X relation");

    const SquareMatrix cy = sqrt2 * commutator(t, bases.y_at(r, 0));
    const SquareMatrix target_y = bases.y_at(r, j);
    const double scale = std::max({1.0, cy.max_norm(), target_y.max_norm()});
    if ((cy + beta * target_y).max_norm() > eps * scale)
        throw Error(ErrorCode::proportionality_failure, "Y relation does not carry the opposite coefficient");
    return beta;
}

Complex beta_closed(int n, int r, const ExponentLabel &label)
{
    require_r(n, r);
    require_label(n, label);
    if (label.primed) {
        const double s = std::sqrt(2.0 * n - 2.0);
        return s * ((r == n - 1 ? 1.0 : 0.0) - (r == n ? 1.0 : 0.0));
    }
    if (r >= n - 1)
        return std::sqrt(2.0);
    const int h = 2 * n - 2;
    return std::sqrt(2.0) * (1.0 + eigenvalue(EigenvalueTag::root(mod(r * label.value, h)), h));
}

Complex g_extract(int r, const DualBases &bases)
{
    require_r(bases.n, r);
    return coroot_coefficient_sum(bases.x_at(r, 0)) * coroot_coefficient_sum(bases.y_at(r, 0));
}

Complex g_closed(int n, int r)
{
    require_r(n, r);
    if (r >= n - 1)
        return (n - 1.0) * (n - 1.0) / 2.0;
    const int h = 2 * n - 2;
    const Complex w = eigenvalue(EigenvalueTag::root(r), h);
    const Complex wi = eigenvalue(EigenvalueTag::root(mod(-r, h)), h);
    return (n - 1.0) / 2.0 * (2.0 - w - wi) / (2.0 + w + wi);
}

double g_sum_target(int n)
{
    const double h = 2.0 * n - 2.0;
    return n * h * (h + 1.0) / 12.0;
}

Complex HierarchyCoefficients::beta_at(int r, const ExponentLabel &label) const
{
    require_r(n, r);
    const auto it = beta[r].find(label);
    if (it == beta[r].end())
        throw Error(ErrorCode::invalid_tag, "no beta for label " + to_string(label));
    return it->second;
}

Complex HierarchyCoefficients::g_sum() const
{
    Complex s = 0.0;
    for (int r = 1; r <= n; ++r)
        s += g[r];
    return s;
}

HierarchyCoefficients extract_coefficients(int n, double eps)
{
    const auto bases = cached_dual_bases(n);
    HierarchyCoefficients c;
    c.n = n;
    c.h = 2 * n - 2;
    c.kappa = kappa(n);
    c.beta.assign(n + 1, {});
    c.g.assign(n + 1, 0.0);
    c.rho_x.assign(n + 1, 0.0);
    c.rho_y.assign(n + 1, 0.0);
    for (int r = 1; r <= n; ++r) {
        for (const auto &label : exponent_labels(n))
            c.beta[r][label] = beta_extract(r, label, *bases, eps);
        c.rho_x[r] = coroot_coefficient_sum(bases->x_at(r, 0));
        c.rho_y[r] = coroot_coefficient_sum(bases->y_at(r, 0));
        c.g[r] = c.rho_x[r] * c.rho_y[r];
    }
    return c;
}

HierarchyCoefficients closed_coefficients(int n)
{
    require_rank(n);
    HierarchyCoefficients c;
    c.n = n;
    c.h = 2 * n - 2;
    c.kappa = kappa(n);
    c.beta.assign(n + 1, {});
    c.g.assign(n + 1, 0.0);
    for (int r = 1; r <= n; ++r) {
        for (const auto &label : exponent_labels(n))
            c.beta[r][label] = beta_closed(n, r, label);
        c.g[r] = g_closed(n, r);
    }
    return c;
}

} // namespace dnkw
