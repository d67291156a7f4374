#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spiralbrick {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* kind() const noexcept { return "Error"; }
};

#define SPIRALBRICK_DEFINE_ERROR(Name)                                 \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& msg) : Error(msg) {}          \
        const char* kind() const noexcept override { return #Name; }   \
    }

SPIRALBRICK_DEFINE_ERROR(DegenerateInput);
SPIRALBRICK_DEFINE_ERROR(DomainError);
SPIRALBRICK_DEFINE_ERROR(InvalidSpec);
SPIRALBRICK_DEFINE_ERROR(ClosureError);
SPIRALBRICK_DEFINE_ERROR(GeometryError);
SPIRALBRICK_DEFINE_ERROR(EmptyResult);
SPIRALBRICK_DEFINE_ERROR(ShapeMismatch);
SPIRALBRICK_DEFINE_ERROR(UnreachableTarget);
SPIRALBRICK_DEFINE_ERROR(EmptyLog);
SPIRALBRICK_DEFINE_ERROR(ParseError);
SPIRALBRICK_DEFINE_ERROR(IoError);
SPIRALBRICK_DEFINE_ERROR(AssemblyError);

#undef SPIRALBRICK_DEFINE_ERROR

/// Config validation failure carrying every violated invariant, each
/// message path-qualified (e.g. "executor.v_max: must be > 0").
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const char* kind() const noexcept override { return "ValidationError"; }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

}  // namespace spiralbrick
