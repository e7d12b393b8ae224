#pragma once

#include <stdexcept>
#include <string>

namespace ck {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// graph is not a DAG (undirected edge or directed cycle) where one is required
class InvalidGraphError : public Error {
public:
    using Error::Error;
};

// conflict or ambiguity flags are still present
class UnresolvedGraphError : public Error {
public:
    using Error::Error;
};

class DegenerateDataError : public Error {
public:
    using Error::Error;
};

class InsufficientSamplesError : public Error {
public:
    using Error::Error;
};

// every tuple in the score's support received weight zero
class TrivialWeightError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace ck
