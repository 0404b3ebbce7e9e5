#ifndef CKS_STATUS_HPP
#define CKS_STATUS_HPP

#include <string>

namespace cks {

enum class StepOutcome { ok, blowup_detected, step_underflow, nonfinite };

struct StepStatus {
    StepOutcome outcome = StepOutcome::ok;
    double t = 0.0; // time of the event, or end of the run
    std::string detail;
};

const char* outcome_name(StepOutcome o);

} // namespace cks

#endif
