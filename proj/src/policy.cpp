#include "metasense/policy.hpp"

namespace metasense {

std::string_view to_string(Action a) { return a == Action::human ? "H" : "M"; }

SwitchPoint switch_point(Probability c_h, const AiSpec& spec) {
    spec.validate();
    const double spread = spec.mu1 - spec.mu0;
    if (spread == 0.0) {
        SwitchPoint sp;
        if (spec.theta_m >= c_h) {
            sp.degenerate = Degenerate::always_model;
            sp.c_star = 0.0;
            sp.logit_c_star = -std::numeric_limits<double>::infinity();
        } else {
            sp.degenerate = Degenerate::always_human;
            sp.c_star = 1.0;
            sp.logit_c_star = std::numeric_limits<double>::infinity();
        }
        return sp;
    }
    const double z = spec.sigma * spec.sigma * (logit(c_h) - logit(spec.theta_m)) / spread +
                     0.5 * (spec.mu1 + spec.mu0);
    return {sigmoid(z), z, Degenerate::none};
}

Action decide(const SwitchPoint& sp, double c_m) {
    switch (sp.degenerate) {
        case Degenerate::always_human:
            return Action::human;
        case Degenerate::always_model:
            return Action::model;
        case Degenerate::none:
            break;
    }
    return c_m < sp.c_star ? Action::human : Action::model;
}

Action decide(Probability c_h, Probability c_m, const AiSpec& spec) {
    return decide(switch_point(c_h, spec), c_m);
}

Action decide_logit(const SwitchPoint& sp, double logit_c_m) {
    switch (sp.degenerate) {
        case Degenerate::always_human:
            return Action::human;
        case Degenerate::always_model:
            return Action::model;
        case Degenerate::none:
            break;
    }
    return logit_c_m < sp.logit_c_star ? Action::human : Action::model;
}

}  // namespace metasense
