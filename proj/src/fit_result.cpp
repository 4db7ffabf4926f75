#include "ebransac/fit_result.hpp"

namespace ebransac {

void to_json(nlohmann::json& j, const RestartRecord& r) {
    j = {{"theta_init", r.theta_init}, {"theta", r.theta},   {"loss", r.loss},
         {"iters", r.iters},           {"converged", r.converged},
         {"diverged", r.diverged}};
}

void from_json(const nlohmann::json& j, RestartRecord& r) {
    j.at("theta_init").get_to(r.theta_init);
    j.at("theta").get_to(r.theta);
    j.at("loss").get_to(r.loss);
    j.at("iters").get_to(r.iters);
    j.at("converged").get_to(r.converged);
    j.at("diverged").get_to(r.diverged);
}

void to_json(nlohmann::json& j, const FitResult& r) {
    j = {{"theta", r.theta_star},
         {"ebr_loss", r.ebr_loss},
         {"selection_probs", r.selection_probs},
         {"restarts", r.restart_log},
         {"config", r.config}};
}

void from_json(const nlohmann::json& j, FitResult& r) {
    j.at("theta").get_to(r.theta_star);
    j.at("ebr_loss").get_to(r.ebr_loss);
    j.at("selection_probs").get_to(r.selection_probs);
    j.at("restarts").get_to(r.restart_log);
    r.config = j.value("config", nlohmann::json::object());
}

}  // namespace ebransac
