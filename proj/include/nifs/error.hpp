#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nifs {

enum class ErrorKind {
    degenerate_annulus,
    containment,
    domain,
    branch,
    parameter,
    mode,
    horizon,
    size,
    precondition,
    hypothesis,
    syntax,
    arithmetic,
    config,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports on purpose is an Error. Anything else
// escaping to the CLI is treated as an internal bug.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(what), kind_(kind), index_(index) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Offending factor, entry or stage, when the error names one.
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> index_;
};

} // namespace nifs
