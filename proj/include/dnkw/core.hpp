#ifndef DNKW_CORE_HPP
#define DNKW_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace dnkw
{

using Complex = std::complex<double>;

inline constexpr double default_epsilon = 1e-9;

enum class ErrorCode
{
    rank_too_small,
    dimension_mismatch,
    singular_system,
    out_of_range,
    invalid_tag,
    proportionality_failure,
    truncation_mismatch,
    window_overflow,
    layout_overflow,
    unknown_generator,
};

const char *to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), m_code(code) {}

    ErrorCode code() const noexcept
    {
        return m_code;
    }

private:
    ErrorCode m_code;
};

/// Rank and comparison tolerance for one D_n instance.
class AlgebraConfig
{
public:
    explicit AlgebraConfig(int n, double epsilon = default_epsilon);

    int n() const noexcept
    {
        return m_n;
    }
    /// Coxeter number 2n-2.
    int h() const noexcept
    {
        return 2 * m_n - 2;
    }
    int dim() const noexcept
    {
        return 2 * m_n;
    }
    double epsilon() const noexcept
    {
        return m_epsilon;
    }

private:
    int m_n;
    double m_epsilon;
};

} // namespace dnkw

#endif
