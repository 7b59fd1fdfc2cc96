#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rwval {

/// Base error carrying a stable category name. The CLI prints the category
/// and exits nonzero; tests match on it.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

struct MalformedSeries : Error {
    explicit MalformedSeries(const std::string& m) : Error("MalformedSeries", m) {}
};

struct InvalidDatum : Error {
    explicit InvalidDatum(const std::string& m) : Error("InvalidDatum", m) {}
};

struct InvalidWindow : Error {
    explicit InvalidWindow(const std::string& m) : Error("InvalidWindow", m) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& m) : Error("OutOfRange", m) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error("DomainError", m) {}
};

struct UnsupportedDof : Error {
    explicit UnsupportedDof(const std::string& m) : Error("UnsupportedDof", m) {}
};

struct InsufficientData : Error {
    explicit InsufficientData(const std::string& m) : Error("InsufficientData", m) {}
};

struct InitializationFailure : Error {
    explicit InitializationFailure(const std::string& m) : Error("InitializationFailure", m) {}
};

struct SurrogateNotConcave : Error {
    explicit SurrogateNotConcave(const std::string& m) : Error("SurrogateNotConcave", m) {}
};

struct DivergedEstimate : Error {
    explicit DivergedEstimate(const std::string& m) : Error("DivergedEstimate", m) {}
};

struct EmptyBacktest : Error {
    explicit EmptyBacktest(const std::string& m) : Error("EmptyBacktest", m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error("IoError", m) {}
};

}  // namespace rwval
