#pragma once

#include <stdexcept>
#include <string>

namespace mdcrow {

// Base of every error raised by the library. Tool handlers let these escape;
// the agent loop renders them as "Error: ..." observations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class PersistenceError : public Error {
public:
    using Error::Error;
};

class IntegrityError : public Error {
public:
    using Error::Error;
};

// Transport failure or 5xx from a remote service; callers may retry.
class NetworkError : public Error {
public:
    using Error::Error;
};

} // namespace mdcrow
