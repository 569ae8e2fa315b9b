#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ltower {

// Exit-code classes used by the CLI.
enum class ErrorKind { Precondition = 2, Cap = 3, CrossCheck = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class CertificationError : public Error {
public:
    explicit CertificationError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& what) : Error(ErrorKind::Cap, what) {}
};

class CrossCheckFailure : public Error {
public:
    explicit CrossCheckFailure(const std::string& what) : Error(ErrorKind::CrossCheck, what) {}
};

class PrecisionExhausted : public Error {
public:
    explicit PrecisionExhausted(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

// Raised by exact polynomial division; carries the first nonzero remainder coefficient.
class NonExactDivision : public Error {
public:
    NonExactDivision(int degree, std::vector<unsigned> coeff)
        : Error(ErrorKind::Precondition,
                "non-exact division: remainder coefficient at degree " + std::to_string(degree) + " is nonzero"),
          degree_(degree),
          coeff_(std::move(coeff)) {}
    int degree() const { return degree_; }
    const std::vector<unsigned>& coeff() const { return coeff_; }

private:
    int degree_;
    std::vector<unsigned> coeff_;
};

class NonLinearIsogeny : public Error {
public:
    explicit NonLinearIsogeny(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class NoNormalForm : public Error {
public:
    explicit NoNormalForm(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class NotAFlag : public Error {
public:
    explicit NotAFlag(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

}  // namespace ltower
