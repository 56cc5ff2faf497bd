#pragma once

#include <stdexcept>
#include <string>

namespace kinlab {

struct KinlabError : std::runtime_error {
    explicit KinlabError(const std::string &m) : std::runtime_error(m) {}
};

struct RayDegenerate : KinlabError {
    explicit RayDegenerate(const std::string &m) : KinlabError(m) {}
};
struct NoConvergence : KinlabError {
    explicit NoConvergence(const std::string &m) : KinlabError(m) {}
};
struct DegenerateGradient : KinlabError {
    explicit DegenerateGradient(const std::string &m) : KinlabError(m) {}
};
struct CurvatureDegenerate : KinlabError {
    explicit CurvatureDegenerate(const std::string &m) : KinlabError(m) {}
};
struct QuadratureFailure : KinlabError {
    explicit QuadratureFailure(const std::string &m) : KinlabError(m) {}
};
struct CoincidentVelocities : KinlabError {
    explicit CoincidentVelocities(const std::string &m) : KinlabError(m) {}
};
struct BudgetExceeded : KinlabError {
    explicit BudgetExceeded(const std::string &m) : KinlabError(m) {}
};
struct UnknownCheck : KinlabError {
    explicit UnknownCheck(const std::string &m) : KinlabError(m) {}
};
struct MembershipViolation : KinlabError {
    explicit MembershipViolation(const std::string &m) : KinlabError(m) {}
};
struct ConfigError : KinlabError {
    explicit ConfigError(const std::string &m) : KinlabError(m) {}
};

}  // namespace kinlab
