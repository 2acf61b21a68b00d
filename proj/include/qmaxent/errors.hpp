#pragma once

#include <stdexcept>
#include <string>

namespace qmaxent {

// Base of all library errors. exit_code() is the process exit status the CLI
// maps the error to (0 ok; 2 parse; 3 non-convergence; 4 infeasible;
// 5 too-large; 6 fit failure; 7 insufficient data; 1 anything else).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg, int exit_code = 1)
        : std::runtime_error(msg), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg, 2) {}
};

// Invalid domain values supplied by the caller (bad probabilities, q <= 0, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg, 2) {}
};

class InvalidDistribution : public Error {
public:
    explicit InvalidDistribution(const std::string& msg) : Error(msg, 2) {}
};

// KL divergence is +infinity: some p_i > 0 where the reference has r_i = 0.
class DivergenceInfinite : public Error {
public:
    explicit DivergenceInfinite(const std::string& msg) : Error(msg, 1) {}
};

// Mutual information outside [0, min(h_a, h_b)].
class InvalidMutualInformation : public Error {
public:
    explicit InvalidMutualInformation(const std::string& msg) : Error(msg, 2) {}
};

class InfeasibleTargets : public Error {
public:
    explicit InfeasibleTargets(const std::string& msg) : Error(msg, 4) {}
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& msg, double residual)
        : Error(msg, 3), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class TooLarge : public Error {
public:
    explicit TooLarge(const std::string& msg) : Error(msg, 5) {}
};

// Asymptotic degeneracy count is undefined for d = 0.
class UnsupportedD : public Error {
public:
    explicit UnsupportedD(const std::string& msg) : Error(msg, 2) {}
};

// No chain configuration attains the requested magnetization.
class EmptyStratum : public Error {
public:
    explicit EmptyStratum(const std::string& msg) : Error(msg, 2) {}
};

// Every q-deformed weight vanished (q < 1 with psi beyond the support bound).
class DegenerateSupport : public Error {
public:
    explicit DegenerateSupport(const std::string& msg) : Error(msg, 1) {}
};

// The likelihood is monotone over the psi search bracket.
class NoInteriorMaximum : public Error {
public:
    NoInteriorMaximum(const std::string& msg, double lo, double hi)
        : Error(msg, 1), lo_(lo), hi_(hi) {}
    double bracket_lo() const { return lo_; }
    double bracket_hi() const { return hi_; }

private:
    double lo_, hi_;
};

class AllPointsFailed : public Error {
public:
    explicit AllPointsFailed(const std::string& msg) : Error(msg, 6) {}
};

class InsufficientPoints : public Error {
public:
    explicit InsufficientPoints(const std::string& msg) : Error(msg, 7) {}
};

} // namespace qmaxent
