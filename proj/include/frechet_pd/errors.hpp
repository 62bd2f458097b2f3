#pragma once

#include <stdexcept>
#include <string>

namespace fpd {

// Invalid argument or precondition violation (maps to exit code 1 / FPD_ERR_ARGUMENT).
class argument_error : public std::runtime_error {
public:
    explicit argument_error(const std::string& what) : std::runtime_error(what) {}
};

// Instance exceeds a documented size guard (maps to exit code 2 / FPD_ERR_CAPACITY).
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data; message carries line/position where known.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// File could not be opened, read or written.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fpd
