#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "infcartel/advertising.hpp"
#include "infcartel/cartel.hpp"
#include "infcartel/empirics/lda.hpp"
#include "infcartel/empirics/regression.hpp"
#include "infcartel/empirics/similarity.hpp"
#include "infcartel/empirics/synth.hpp"
#include "infcartel/empirics/text.hpp"
#include "infcartel/equilibrium.hpp"
#include "infcartel/montecarlo.hpp"
#include "infcartel/pod.hpp"

namespace py = pybind11;
using namespace infcartel;

namespace {

py::dict stat(const Stat& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["std_error"] = s.std_error;
  return d;
}

py::dict report(const SimReport& r) {
  py::dict d;
  d["kind"] = r.kind;
  d["engagement_rate"] = stat(r.engagement_rate);
  d["welfare_per_player"] = stat(r.welfare_per_player);
  d["member_payoff"] = stat(r.member_payoff);
  d["membership_share"] = stat(r.membership_share);
  d["realized_price"] = stat(r.realized_price);
  d["fixed_point_r_bar"] = stat(r.fixed_point_r_bar);
  d["iterations"] = r.iterations;
  d["replications"] = r.replications;
  d["n_players"] = r.n_players;
  d["seed"] = r.seed;
  return d;
}

pod::SubmissionLog to_log(const std::vector<std::tuple<std::string, std::string, pod::Timestamp>>& rows) {
  pod::SubmissionLog log;
  for (const auto& [m, p, t] : rows) log.push_back({m, p, t});
  return log;
}

std::vector<empirics::PanelObservation> to_panel(
    const std::vector<std::tuple<std::string, std::string, std::string, double>>& rows) {
  std::vector<empirics::PanelObservation> panel;
  for (const auto& [a, c, cls, s] : rows) panel.push_back({a, c, empirics::parse_commenter_class(cls), s});
  return panel;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Influencer cartel model. Angles are in radians; CartelAgreement.from_degrees converts.";

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<pod::MalformedLog>(m, "MalformedLog", PyExc_ValueError);
  py::register_exception<empirics::RankDeficiency>(m, "RankDeficiency", PyExc_ValueError);
  py::register_exception<empirics::EmptyCorpus>(m, "EmptyCorpus", PyExc_ValueError);

  m.def("equilibrium_threshold", [](double g) { return equilibrium_rule(g).threshold; }, py::arg("gamma"));
  m.def("social_optimum_threshold", [] { return social_optimum_rule().threshold; });
  m.def("engagement_probability", [](double threshold) {
    return engagement_probability(EngagementRule{threshold, RuleKind::Equilibrium});
  }, py::arg("threshold"));

  py::class_<CartelAgreement>(m, "CartelAgreement")
      .def_static("from_radians", &CartelAgreement::from_radians, py::arg("requirement"), py::arg("min_reach") = 1.0)
      .def_static("from_degrees", &CartelAgreement::from_degrees, py::arg("degrees"), py::arg("min_reach") = 1.0)
      .def_static("from_lambda", &CartelAgreement::from_lambda, py::arg("lam"), py::arg("min_reach") = 1.0)
      .def_property_readonly("requirement", &CartelAgreement::requirement)
      .def_property_readonly("requirement_degrees", &CartelAgreement::requirement_degrees)
      .def_property_readonly("lam", &CartelAgreement::lambda)
      .def_property_readonly("min_reach", &CartelAgreement::min_reach)
      .def("__repr__", [](const CartelAgreement& a) {
        return "CartelAgreement(requirement_degrees=" + std::to_string(a.requirement_degrees()) +
               ", min_reach=" + std::to_string(a.min_reach()) + ")";
      });

  m.def("entry_equilibrium", [](const CartelAgreement& a, double g) {
    const EntryOutcome e = entry_equilibrium(a, g);
    return std::make_pair(std::string(to_string(e.kind)), e.r_bar);
  }, py::arg("agreement"), py::arg("gamma"));
  m.def("participation_probability", &participation_probability, py::arg("lam"), py::arg("gamma"),
        py::arg("min_reach") = 1.0);
  m.def("welfare_W", &welfare_W, py::arg("lam"), py::arg("gamma"), py::arg("min_reach") = 1.0);
  m.def("mean_member_payoff_V", &mean_member_payoff_V, py::arg("lam"), py::arg("gamma"), py::arg("min_reach") = 1.0);
  m.def("gamma_inc", &gamma_inc);
  m.def("gamma_inc_quartic", &gamma_inc_quartic, py::arg("lam"));
  m.def("first_best_lambda", &first_best_lambda);
  m.def("optimal_lambda", &optimal_lambda, py::arg("gamma"));

  m.def("price_natural", &price_natural, py::arg("gamma"), py::arg("v") = 1.0);
  m.def("price_cartel", &price_cartel, py::arg("requirement"), py::arg("v") = 1.0);
  m.def("price_engagement", [](double g, double v, double eps, double requirement) {
    const PriceQuote q = price_engagement(MarketParams::make(g, v, eps), requirement);
    return py::dict(py::arg("p_natural") = q.p_natural, py::arg("p_cartel") = q.p_cartel,
                    py::arg("p_engagement") = q.p_engagement);
  }, py::arg("gamma"), py::arg("v"), py::arg("epsilon"), py::arg("requirement"));
  m.def("min_v_for_sustained_cartel", &min_v_for_sustained_cartel, py::arg("agreement"), py::arg("gamma"),
        py::arg("epsilon"), py::arg("r_bar_target"));
  m.def("tightening_gain_sign", [](double g, double eps) {
    const TighteningGain t = tightening_gain_sign(g, eps);
    return py::dict(py::arg("epsilon_star") = t.epsilon_star, py::arg("prefers_tighter") = t.prefers_tighter,
                    py::arg("slope_at_pi") = t.slope_at_pi);
  }, py::arg("gamma"), py::arg("epsilon"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("n_players", &SimConfig::n_players)
      .def_readwrite("gamma", &SimConfig::gamma)
      .def_readwrite("v", &SimConfig::v)
      .def_readwrite("epsilon", &SimConfig::epsilon)
      .def_readwrite("agreement", &SimConfig::agreement)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("replications", &SimConfig::replications)
      .def_readwrite("threads", &SimConfig::threads)
      .def_readwrite("r_bar_start", &SimConfig::r_bar_start)
      .def_readwrite("tolerance", &SimConfig::tolerance)
      .def_readwrite("max_iterations", &SimConfig::max_iterations);

  // The simulations release the GIL; they touch no Python objects.
  m.def("simulate_natural", [](const SimConfig& c) {
    SimReport r;
    {
      py::gil_scoped_release nogil;
      r = simulate_natural(c);
    }
    return report(r);
  }, py::arg("config"));
  m.def("simulate_cartel_entry", [](const SimConfig& c) {
    SimReport r;
    {
      py::gil_scoped_release nogil;
      r = simulate_cartel_entry(c);
    }
    return report(r);
  }, py::arg("config"));
  m.def("simulate_market", [](const SimConfig& c) {
    SimReport r;
    {
      py::gil_scoped_release nogil;
      r = simulate_market(c);
    }
    return report(r);
  }, py::arg("config"));

  m.def("derive_obligations", [](const std::vector<std::tuple<std::string, std::string, pod::Timestamp>>& log,
                                 std::size_t n, const std::string& mode) {
    return pod::derive_obligations(to_log(log), n, pod::parse_window_mode(mode)).per_submission;
  }, py::arg("log"), py::arg("n") = 5, py::arg("mode") = "distinct",
        "Log rows are (member, post, timestamp). Returns the obligated posts of each submission.");
  m.def("direct_engagement_count", [](const std::vector<std::tuple<std::string, std::string, pod::Timestamp>>& log,
                                      std::size_t n, const std::string& mode) {
    return pod::direct_engagement_count(pod::derive_obligations(to_log(log), n, pod::parse_window_mode(mode)));
  }, py::arg("log"), py::arg("n") = 5, py::arg("mode") = "distinct");
  m.def("validate", [](const std::vector<std::tuple<std::string, std::string, pod::Timestamp>>& log,
                       const std::vector<std::tuple<std::string, std::string, pod::Timestamp, std::string>>& events,
                       std::size_t n, std::optional<pod::Timestamp> deadline) {
    std::vector<pod::EngagementEvent> ev;
    for (const auto& [mem, post, t, kind] : events) ev.push_back({mem, post, t, pod::parse_engagement_kind(kind)});
    pod::ValidationOptions opts;
    opts.n = n;
    opts.deadline_window = deadline;
    const auto r = pod::validate(to_log(log), ev, opts);
    std::vector<std::size_t> deleted;
    for (const auto& v : r.violations) deleted.push_back(v.submission_index);
    std::vector<std::tuple<std::string, std::string, pod::Timestamp>> kept;
    for (const auto& s : r.purged_log) kept.emplace_back(s.member, s.post, s.timestamp);
    return std::make_pair(deleted, kept);
  }, py::arg("log"), py::arg("events"), py::arg("n") = 5, py::arg("deadline") = py::none(),
        "Events are (member, post, timestamp, 'like'|'comment'). Returns (deleted indices, purged log).");

  m.def("extract_hashtags", &empirics::extract_hashtags, py::arg("text"));
  m.def("cosine_similarity", [](const std::vector<double>& u, const std::vector<double>& v) {
    return empirics::cosine_similarity(u, v);
  }, py::arg("u"), py::arg("v"));
  m.def("normalized_value", &empirics::normalized_value, py::arg("sim_class"), py::arg("sim_natural"),
        py::arg("sim_random"));
  m.def("fe_regression", [](const std::vector<std::tuple<std::string, std::string, std::string, double>>& rows) {
    const auto r = empirics::fe_regression(to_panel(rows));
    py::dict coef, se;
    for (std::size_t j = 0; j < empirics::kRegressorClasses.size(); ++j) {
      coef[py::str(empirics::to_string(empirics::kRegressorClasses[j]))] = r.coefficients[j];
      se[py::str(empirics::to_string(empirics::kRegressorClasses[j]))] = r.std_errors[j];
    }
    return py::dict(py::arg("coefficients") = coef, py::arg("std_errors") = se, py::arg("base_mean") = r.base_mean,
                    py::arg("n_obs") = r.n_obs, py::arg("n_authors") = r.n_authors);
  }, py::arg("panel"), "Panel rows are (author, commenter, class, similarity).");
  m.def("synth_panel", [](std::size_t authors, double gamma, double lambda_topic, double sigma, std::uint64_t seed) {
    empirics::SynthConfig c;
    c.n_authors = authors;
    c.gamma = gamma;
    c.lambda_topic = lambda_topic;
    c.noise_sigma = sigma;
    c.seed = seed;
    std::vector<std::tuple<std::string, std::string, std::string, double>> rows;
    for (const auto& o : empirics::synth_generate(c).panel)
      rows.emplace_back(o.author_id, o.commenter_id, empirics::to_string(o.commenter_class), o.similarity);
    return rows;
  }, py::arg("authors") = 1000, py::arg("gamma") = 0.5, py::arg("lambda_topic") = 0.7853981633974483,
        py::arg("sigma") = 0.05, py::arg("seed") = 1);
  m.def("lda_fit", [](const std::vector<std::pair<std::string, std::vector<std::string>>>& docs, std::size_t k,
                      std::size_t iterations, std::size_t burn_in, std::uint64_t seed, bool prune) {
    empirics::Corpus corpus;
    for (const auto& [id, tokens] : docs) corpus.push_back({id, tokens});
    empirics::LdaConfig c;
    c.k = k;
    c.iterations = iterations;
    c.burn_in = burn_in;
    c.seed = seed;
    if (!prune) c.prune = empirics::PruneConfig::none();
    empirics::LdaModel model;
    {
      py::gil_scoped_release nogil;
      model = empirics::lda_fit(corpus, c);
    }
    return py::dict(py::arg("vocabulary") = model.vocabulary, py::arg("doc_ids") = model.doc_ids,
                    py::arg("topic_word") = model.topic_word, py::arg("doc_topic") = model.doc_topic,
                    py::arg("log_likelihood") = model.log_likelihood);
  }, py::arg("docs"), py::arg("k") = 6, py::arg("iterations") = 2000, py::arg("burn_in") = 500, py::arg("seed") = 1,
        py::arg("prune") = true, "docs are (id, tokens) pairs.");
}
