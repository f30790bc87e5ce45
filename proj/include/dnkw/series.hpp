#ifndef DNKW_SERIES_HPP
#define DNKW_SERIES_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <dnkw/principal_heisenberg.hpp>

namespace dnkw
{

/// A positive exponent of D_n^(1): a residue label lifted by `level` multiples of h.
struct Exponent
{
    ExponentLabel label;
    int level = 0;
    /// label.value + level * h; also the weight of t_j / y_j.
    int value = 1;

    auto operator<=>(const Exponent &o) const
    {
        if (auto c = value <=> o.value; c != 0)
            return c;
        return label.primed <=> o.label.primed;
    }
    bool operator==(const Exponent &o) const
    {
        return value == o.value && label.primed == o.label.primed;
    }
};

Exponent make_exponent(int n, const ExponentLabel &label, int level);

/// "9" or "9p" (numeric value, primed marker).
std::string to_string(const Exponent &e);

/// All exponents with value <= bound, increasing, unprimed before primed.
std::vector<Exponent> exponents_up_to(int n, int bound);

/// Variable families that can live in one series.
enum class Family : std::uint8_t
{
    t,
    y,
    /// formal Hirota symbols D_j
    d,
};

const char *family_prefix(Family f);

using MonomialKey = std::uint64_t;

/// The finite set of variables of a truncated series and the packing of their
/// exponents into a 64-bit key.
///
/// Each family carries its own weighted-degree bound and the space carries a joint
/// bound. A variable of weight w gets a bit field wide enough for
/// floor(min(family bound, joint bound) / w), so adding two keys whose weights
/// respect the bounds never carries across fields.
class VariableSpace
{
public:
    struct FamilyBound
    {
        Family family;
        int bound;
        bool operator==(const FamilyBound &) const = default;
    };

    struct Variable
    {
        Family family;
        int family_slot;
        Exponent exponent;
        int weight;
        int offset;
        int width;
        int max_exponent;
    };

    static std::shared_ptr<const VariableSpace> make(int n, std::vector<FamilyBound> families, int total_bound);

    int n() const noexcept
    {
        return m_n;
    }
    int h() const noexcept
    {
        return 2 * m_n - 2;
    }
    int total_bound() const noexcept
    {
        return m_total;
    }
    const std::vector<FamilyBound> &families() const noexcept
    {
        return m_families;
    }
    bool has_family(Family f) const;
    int family_slot(Family f) const;
    int family_bound(Family f) const;

    int size() const noexcept
    {
        return static_cast<int>(m_vars.size());
    }
    const Variable &variable(int idx) const
    {
        return m_vars[idx];
    }
    const std::vector<Variable> &variables() const noexcept
    {
        return m_vars;
    }
    /// -1 when the variable is not part of this space.
    int index_of(Family f, const Exponent &e) const;

    int exponent(MonomialKey key, int var) const
    {
        const auto &v = m_vars[var];
        return static_cast<int>((key >> v.offset) & ((MonomialKey{1} << v.width) - 1));
    }
    MonomialKey unit(int var) const
    {
        return MonomialKey{1} << m_vars[var].offset;
    }
    int weight(MonomialKey key) const;
    int family_weight(MonomialKey key, int slot) const;
    /// Joint and per-family bounds respected.
    bool fits(int total, const int *family_weights) const;

    /// Human-readable monomial such as "t_1^2*y_3p".
    std::string monomial_string(MonomialKey key) const;

    bool operator==(const VariableSpace &o) const
    {
        return m_n == o.m_n && m_total == o.m_total && m_families == o.m_families;
    }

private:
    int m_n = 0;
    int m_total = 0;
    std::vector<FamilyBound> m_families;
    std::vector<Variable> m_vars;
};

using SpacePtr = std::shared_ptr<const VariableSpace>;

inline constexpr double prune_tolerance = 1e-14;
inline constexpr int max_families = 3;

/// Polynomial with complex coefficients in the variables of a VariableSpace, truncated
/// at the space's weighted-degree bounds. Terms are kept in key order, so iteration
/// and summation order are deterministic.
class TruncatedSeries
{
public:
    explicit TruncatedSeries(SpacePtr space) : m_space(std::move(space)) {}

    static TruncatedSeries constant(SpacePtr space, Complex c);
    static TruncatedSeries variable(SpacePtr space, Family f, const Exponent &e, Complex c = 1.0);

    const SpacePtr &space() const noexcept
    {
        return m_space;
    }
    const std::map<MonomialKey, Complex> &terms() const noexcept
    {
        return m_terms;
    }
    bool empty() const noexcept
    {
        return m_terms.empty();
    }
    std::size_t size() const noexcept
    {
        return m_terms.size();
    }

    Complex coefficient(MonomialKey key) const;
    /// Adds c to the coefficient of key; drops the term if it falls outside the bounds.
    void add_term(MonomialKey key, Complex c);

    TruncatedSeries &operator+=(const TruncatedSeries &o);
    TruncatedSeries &operator-=(const TruncatedSeries &o);
    TruncatedSeries &operator*=(Complex c);

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries &b)
    {
        return a += b;
    }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries &b)
    {
        return a -= b;
    }
    friend TruncatedSeries operator*(TruncatedSeries a, Complex c)
    {
        return a *= c;
    }
    friend TruncatedSeries operator*(Complex c, TruncatedSeries a)
    {
        return a *= c;
    }
    friend TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b);

    /// d/dv for variable index var.
    TruncatedSeries derivative(int var) const;
    TruncatedSeries derivative(Family f, const Exponent &e) const;

    /// Drops |c| <= tol * max|c|.
    void prune(double tol = prune_tolerance);
    double max_abs() const;

    /// Terms of weight <= bound only.
    TruncatedSeries truncated(int bound) const;

    /// Re-encodes into another space; variables missing there must not occur.
    TruncatedSeries embed(const SpacePtr &target) const;

    /// Sets every variable of family f to zero.
    TruncatedSeries set_zero(Family f) const;

    /// Multiplies the coefficient of each monomial by the total weight of its f-part.
    TruncatedSeries euler(Family f) const;

    Complex evaluate(const std::function<Complex(const VariableSpace::Variable &)> &value) const;

    std::string to_string() const;

private:
    SpacePtr m_space;
    std::map<MonomialKey, Complex> m_terms;
};

/// Product with weighted-degree truncation; both operands must share the same space.
TruncatedSeries mul_truncated(const TruncatedSeries &a, const TruncatedSeries &b);

/// exp(a) truncated; a must have no constant term.
TruncatedSeries exp_series(const TruncatedSeries &a);

/// max|a - b| over all coefficients.
double max_abs_difference(const TruncatedSeries &a, const TruncatedSeries &b);

/// Series in a formal variable z with coefficients in a TruncatedSeries space; only
/// z-degrees in [-window, window] are kept.
class LaurentBlock
{
public:
    LaurentBlock(SpacePtr space, int window) : m_space(std::move(space)), m_window(window) {}

    const SpacePtr &space() const noexcept
    {
        return m_space;
    }
    int window() const noexcept
    {
        return m_window;
    }
    const std::map<int, TruncatedSeries> &blocks() const noexcept
    {
        return m_blocks;
    }

    /// Coefficient of z^degree (empty series if absent).
    TruncatedSeries coefficient(int degree) const;
    /// Throws window_overflow when |degree| exceeds the window.
    void add(int degree, const TruncatedSeries &s);

    LaurentBlock &operator+=(const LaurentBlock &o);
    friend LaurentBlock operator*(const LaurentBlock &a, const LaurentBlock &b);

    /// z^0 coefficient of a*b without forming the full product.
    friend TruncatedSeries constant_term_of_product(const LaurentBlock &a, const LaurentBlock &b);

private:
    SpacePtr m_space;
    int m_window;
    std::map<int, TruncatedSeries> m_blocks;
};

/// Substitutes v_j -> v_j + shift(j) z^{z_sign * value(j)} for every variable of family f.
/// Exact on polynomials.
LaurentBlock shift_to_laurent(const TruncatedSeries &s, Family f,
                              const std::function<Complex(const Exponent &)> &shift, int z_sign, int window);

/// exp(sum_j c(j) v_j z^{z_sign * value(j)}) over the variables of family f in `space`.
LaurentBlock exp_laurent(const SpacePtr &space, Family f, const std::function<Complex(const Exponent &)> &c,
                         int z_sign, int window);

} // namespace dnkw

#endif
