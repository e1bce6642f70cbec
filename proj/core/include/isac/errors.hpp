#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace isac {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The target scene does not span all transmit dimensions.
class RankDeficiencyError : public std::runtime_error {
public:
    RankDeficiencyError(int rank, int required)
        : std::runtime_error("sensing correlation is rank deficient: rank " + std::to_string(rank) +
                             " < " + std::to_string(required)),
          rank_(rank), required_(required) {}

    int rank() const noexcept { return rank_; }
    int required() const noexcept { return required_; }

private:
    int rank_;
    int required_;
};

/// Input that admits no meaningful allocation (for example all-zero gains).
class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative solver gave up. Carries the best iterate it found.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> best_powers, double sr_residual,
                     double cr_residual)
        : std::runtime_error(what), best_powers_(std::move(best_powers)),
          sr_residual_(sr_residual), cr_residual_(cr_residual) {}

    const std::vector<double>& best_powers() const noexcept { return best_powers_; }
    double sr_residual() const noexcept { return sr_residual_; }
    double cr_residual() const noexcept { return cr_residual_; }

private:
    std::vector<double> best_powers_;
    double sr_residual_;
    double cr_residual_;
};

}  // namespace isac
