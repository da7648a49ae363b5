#ifndef SGFIT_ERRORS_HPP
#define SGFIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sgfit {

/// Input outside the mathematical domain of a formula (rho <= 0, T <= 0, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A state that the model cannot represent (e.g. p + p_inf <= 0).
class NonPhysicalStateError : public std::runtime_error {
public:
    explicit NonPhysicalStateError(const std::string& what) : std::runtime_error(what) {}
};

/// A fit window that fails rank or variance preconditions.
class DegenerateWindowError : public std::runtime_error {
public:
    DegenerateWindowError(const std::string& what, int estimated_rank = -1)
        : std::runtime_error(what), estimated_rank_(estimated_rank) {}

    /// Estimated column rank of the design matrix, or -1 if not applicable.
    int estimated_rank() const { return estimated_rank_; }

private:
    int estimated_rank_;
};

/// A solve that completed but produced parameters violating gamma > 1 or c_v > 0.
class InvalidFitError : public std::runtime_error {
public:
    explicit InvalidFitError(const std::string& what) : std::runtime_error(what) {}
};

/// Query outside the tabulated (p, T) domain.
class TableRangeError : public std::out_of_range {
public:
    explicit TableRangeError(const std::string& what) : std::out_of_range(what) {}
};

/// Malformed input data file.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sgfit

#endif // SGFIT_ERRORS_HPP
