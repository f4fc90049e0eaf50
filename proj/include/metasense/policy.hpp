#pragma once

// Ideal-observer reliance policy: keep the human answer while the AI's
// confidence is below the switch point, adopt the AI answer otherwise.

#include "metasense/confidence_model.hpp"

#include <string_view>

namespace metasense {

enum class Action { human, model };

std::string_view to_string(Action a);

enum class Degenerate { none, always_human, always_model };

struct SwitchPoint {
    double c_star = 0.5;
    double logit_c_star = 0.0;
    Degenerate degenerate = Degenerate::none;
};

// The AI confidence at which p(y_m = 1 | c_m) equals c_h.
//
// With d = 0 the calibration curve is flat at theta_m and there is no
// crossing; the result then defers wholesale to whichever agent is more
// accurate (ties go to the model).
SwitchPoint switch_point(Probability c_h, const AiSpec& spec);

// Human iff c_m < c_star. c_m == c_star goes to the model.
Action decide(const SwitchPoint& sp, double c_m);
Action decide(Probability c_h, Probability c_m, const AiSpec& spec);

// Same decision, comparing in logit space.
Action decide_logit(const SwitchPoint& sp, double logit_c_m);

inline int utility(Action a, bool human_correct, bool model_correct) {
    return (a == Action::human ? human_correct : model_correct) ? 1 : 0;
}

}  // namespace metasense
