#pragma once

#include <stdexcept>
#include <string>

namespace probesim {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AttachWhileAttached : SimError {
    AttachWhileAttached() : SimError("attach_probe: probe is already attached") {}
};

struct AttachAfterDeploy : SimError {
    AttachAfterDeploy() : SimError("attach_probe: probe has already been deployed") {}
};

struct DetachWhileDetached : SimError {
    DetachWhileDetached() : SimError("detach_probe: probe is not attached") {}
};

struct NonFiniteCommand : SimError {
    NonFiniteCommand() : SimError("step_vehicle: velocity command is not finite") {}
};

struct NonFiniteError : SimError {
    NonFiniteError() : SimError("pid_step: error vector is not finite") {}
};

struct NonPSDCovariance : SimError {
    NonPSDCovariance() : SimError("kalman: covariance is not positive semi-definite") {}
};

struct DegenerateBounds : SimError {
    explicit DegenerateBounds(const std::string& what)
        : SimError("lawnmower_waypoints: " + what) {}
};

struct InvalidTransition : SimError {
    explicit InvalidTransition(const std::string& what) : SimError(what) {}
};

struct ScenarioInvalid : SimError {
    explicit ScenarioInvalid(const std::string& what) : SimError("scenario: " + what) {}
};

struct InsufficientTrials : SimError {
    explicit InsufficientTrials(const std::string& what) : SimError(what) {}
};

}  // namespace probesim
