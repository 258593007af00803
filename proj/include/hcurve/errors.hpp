#pragma once

#include <stdexcept>
#include <string>

namespace hcurve {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergence : Error {
    using Error::Error;
};
struct DegenerateInput : Error {
    using Error::Error;
};
struct DegreeViolation : Error {
    using Error::Error;
};
struct NearSingular : Error {
    using Error::Error;
};
struct OffCurve : Error {
    using Error::Error;
};
struct ZeroBranch : Error {
    using Error::Error;
};
struct SingularDenominator : Error {
    using Error::Error;
};
struct PoleAtR0 : Error {
    using Error::Error;
};
struct NearPole : Error {
    using Error::Error;
};
struct QuadratureFailure : Error {
    using Error::Error;
};
struct NoSignChange : Error {
    using Error::Error;
};
struct BranchCollision : Error {
    using Error::Error;
};
struct StepCollapse : Error {
    using Error::Error;
};

} // namespace hcurve
