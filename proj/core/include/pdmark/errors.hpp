#ifndef PDMARK_ERRORS_HPP
#define PDMARK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pdmark {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A caller violated an operation's input contract (malformed config,
/// wrong automaton, odd configuration where an even one is required, ...).
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

/// Textual input does not match the expected schema. `path()` names the
/// offending field, e.g. "edges[3].from".
class ParseError : public Error {
public:
    ParseError(const std::string& path, const std::string& msg)
        : Error(path + ": " + msg), path_(path) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// A name lookup failed (unknown builtin automaton, unknown machine state).
class LookupError : public Error {
public:
    explicit LookupError(const std::string& msg) : Error(msg) {}
};

/// A configured resource bound was hit (stack-height ceiling during
/// marking-region growth).
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& msg) : Error(msg) {}
};

} // namespace pdmark

#endif
