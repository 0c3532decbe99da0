#pragma once

#include <stdexcept>
#include <string>

namespace weyl {

// Evaluation requested too close to (or on) the measure/source support.
struct PointOnSupport : std::runtime_error {
    explicit PointOnSupport(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidCurve : std::runtime_error {
    explicit InvalidCurve(const std::string& what) : std::runtime_error(what) {}
};

// alpha >= |beta'| (or its generalized form) fails; theta locates the worst
// violation.
struct Inadmissible : std::runtime_error {
    Inadmissible(const std::string& what, double theta_at)
        : std::runtime_error(what), theta(theta_at) {}
    double theta;
};

struct IllConditioned : std::runtime_error {
    explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateArea : std::runtime_error {
    explicit DegenerateArea(const std::string& what) : std::runtime_error(what) {}
};

struct PathBlocked : std::runtime_error {
    explicit PathBlocked(const std::string& what) : std::runtime_error(what) {}
};

struct RootFindFailure : std::runtime_error {
    RootFindFailure(const std::string& what, double theta_at)
        : std::runtime_error(what), theta(theta_at) {}
    double theta;
};

struct SourceCollision : std::runtime_error {
    explicit SourceCollision(const std::string& what) : std::runtime_error(what) {}
};

struct NotMorse : std::runtime_error {
    explicit NotMorse(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace weyl
