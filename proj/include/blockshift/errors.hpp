#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "blockshift/core_words.hpp"

namespace blockshift {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    AlignmentError(const std::string& what, std::int64_t boundary)
        : Error(what), boundary_(boundary) {}
    std::int64_t boundary() const { return boundary_; }

private:
    std::int64_t boundary_;
};

// A finite list (sparse set prefix, explicit target) was asked for more than it holds.
class IncompleteData : public Error {
public:
    using Error::Error;
};

// No block length satisfies the sparsity inequality, or a block holds too many
// pre-filled cells. `witness` is a window where the density bound fails.
class DensityViolation : public Error {
public:
    DensityViolation(const std::string& what, int level, Interval witness, std::int64_t count)
        : Error(what), level_(level), witness_(witness), count_(count) {}
    int level() const { return level_; }
    Interval witness() const { return witness_; }
    std::int64_t count() const { return count_; }

private:
    int level_;
    Interval witness_;
    std::int64_t count_;
};

class InfeasibleDepth : public Error {
public:
    using Error::Error;
};

class ConstructionInvariant : public Error {
public:
    ConstructionInvariant(const std::string& what, std::int64_t block)
        : Error(what), block_(block) {}
    std::int64_t block() const { return block_; }

private:
    std::int64_t block_;
};

class EmptyCore : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    RangeError(const std::string& what, std::int64_t n) : Error(what), n_(n) {}
    std::int64_t n() const { return n_; }

private:
    std::int64_t n_;
};

// Persistence failures. Each mismatch kind is its own type so callers can tell them apart.
class FormatError : public Error {
public:
    using Error::Error;
};

class VersionError : public FormatError {
public:
    using FormatError::FormatError;
};

class ChecksumError : public FormatError {
public:
    using FormatError::FormatError;
};

class InconsistencyError : public FormatError {
public:
    using FormatError::FormatError;
};

}  // namespace blockshift
