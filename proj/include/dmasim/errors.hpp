// SPDX-License-Identifier: Apache-2.0
//
// Exception taxonomy shared by the dmasim library and command line tool.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dmasim {

// Malformed experiment description: bad JSON, unknown keys, out-of-range
// values. The command line tool maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Result file could not be created or written. Exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The analog front end is numerically rank deficient, so the whitened rate
// expression is undefined. Carries the indices of the microstrip rows whose
// output power is negligible, when that is the identifiable cause.
class SingularFrontEndError : public std::runtime_error {
public:
    SingularFrontEndError(const std::string& message, std::vector<std::size_t> rows)
        : std::runtime_error(message), rows_(std::move(rows)) {}

    const std::vector<std::size_t>& offending_rows() const noexcept { return rows_; }

private:
    std::vector<std::size_t> rows_;
};

} // namespace dmasim
