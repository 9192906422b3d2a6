#ifndef KCMD_ERROR_HPP
#define KCMD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kcmd {

// Pipeline stage that raised the error; the CLI maps each stage to a distinct
// exit code.
enum class Stage {
    io = 3,
    validate = 4,
    preprocessing = 5,
    smoothing = 6,
    statistic = 7,
    bootstrap = 8,
    internal = 9,
};

class Error : public std::runtime_error {
public:
    Error(Stage stage, const std::string& what)
        : std::runtime_error(what), stage_(stage) {}
    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

const char* stage_name(Stage stage);

}  // namespace kcmd

#endif
