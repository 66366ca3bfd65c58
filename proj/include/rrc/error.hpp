#pragma once

#include <stdexcept>
#include <string>

namespace rrc {

/// Pipeline stage that raised an error; doubles as the CLI exit code.
enum class Stage : int {
    validation = 2,
    decomposition = 3,
    trap = 4,
    verification = 5,
};

class Error : public std::runtime_error {
public:
    Error(Stage stage, std::string kind, const std::string& detail)
        : std::runtime_error(kind + ": " + detail), stage_(stage), kind_(std::move(kind)) {}

    Stage stage() const noexcept { return stage_; }
    const std::string& kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(stage_); }

private:
    Stage stage_;
    std::string kind_;
};

}  // namespace rrc
