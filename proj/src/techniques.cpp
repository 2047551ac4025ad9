#include "ssyn/techniques.hpp"

#include <cmath>
#include <limits>

#include "ssyn/code_json.hpp"
#include "ssyn/tokens.hpp"

namespace ssyn {

const std::string& RandD::name() const {
  static const std::string n = "RandD";
  return n;
}

std::size_t RandD::choose(const DiscriminativeInstance& instance,
                          RngStream& rng) {
  return rng.uniform_int(instance.options.size());
}

const std::string& EditD::name() const {
  static const std::string n = "EditD";
  return n;
}

std::size_t EditD::choose(const DiscriminativeInstance& instance,
                          RngStream&) {
  return nearest_option(instance.options, instance.observed_attempt,
                        [](const ProgramAst& a, const ProgramAst& b) {
                          return static_cast<double>(tree_edit_distance(a, b));
                        });
}

const std::string& EditEmbD::name() const {
  static const std::string n = "EditEmbD";
  return n;
}

std::size_t EditEmbD::choose(const DiscriminativeInstance& instance,
                             RngStream&) {
  if (!matrix_) {
    throw std::runtime_error("EditEmbD has no distance matrix configured");
  }
  const double alpha = alpha_;
  const DistanceMatrix& m = *matrix_;
  return nearest_option(
      instance.options, instance.observed_attempt,
      [&](const ProgramAst& a, const ProgramAst& b) {
        return combined_distance(
            a, b,
            [](const ProgramAst& x, const ProgramAst& y) {
              return static_cast<double>(tree_edit_distance(x, y));
            },
            m, alpha);
      });
}

std::vector<double> EditEmbD::tuning_grid() const {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

SymSS::SymSS(const BenchmarkStore& store) : store_(store) {
  for (const std::string& ref_id : store.reference_task_ids()) {
    creators_.emplace(ref_id, GrammarCreator(ref_id, store.registry()));
  }
}

const std::string& SymSS::name() const {
  static const std::string n = "SymSS";
  return n;
}

InferenceResult SymSS::infer(const std::string& reference_task_id,
                             const ProgramAst& observed) const {
  const std::string key =
      reference_task_id + "\x1f" + serialize_code(observed);
  auto it = inference_cache_.find(key);
  if (it == inference_cache_.end()) {
    const GrammarCreator& creator = creators_.at(reference_task_id);
    it = inference_cache_
             .emplace(key, creator.infer_type(
                               store_.task(reference_task_id),
                               store_.solution(reference_task_id), observed))
             .first;
  }
  return it->second;
}

std::size_t SymSS::choose(const DiscriminativeInstance& instance,
                          RngStream&) {
  const InferenceResult inferred =
      infer(instance.reference_task_id, instance.observed_attempt);
  if (!inferred.type_id) return 0;

  const GrammarCreator& creator = creators_.at(instance.reference_task_id);
  const MazeTask& target = store_.task(instance.target_task_id);
  const ProgramAst& target_solution = store_.solution(instance.target_task_id);

  // Options differ in length, so likelihoods are compared per token
  // (geometric mean), mirroring the rule-count normalization used when
  // ranking sampled codes.
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < instance.options.size(); ++i) {
    const std::string key = instance.target_task_id + "\x1f" +
                            *inferred.type_id + "\x1f" +
                            serialize_code(instance.options[i]);
    auto it = option_score_cache_.find(key);
    if (it == option_score_cache_.end()) {
      it = option_score_cache_
               .emplace(key, creator.log_likelihood(target, target_solution,
                                                    *inferred.type_id,
                                                    instance.options[i]))
               .first;
    }
    if (!it->second) continue;
    const std::size_t tokens = tokenize(instance.options[i]).size();
    const double score =
        *it->second / static_cast<double>(std::max<std::size_t>(tokens, 1));
    if (!any || score > best_score) {
      any = true;
      best_score = score;
      best = i;
    }
  }
  return best;
}

std::vector<SynthesizedCode> SymSS::synthesize(const Scenario& scenario,
                                               RngStream& rng,
                                               int sample_count) {
  const InferenceResult inferred =
      infer(scenario.reference_task_id, scenario.observed_attempt);
  if (!inferred.type_id) {
    throw std::runtime_error(
        "behavior type is undetermined for the observed attempt of " +
        scenario.id);
  }
  const GrammarCreator& creator = creators_.at(scenario.reference_task_id);
  return creator.synthesize_attempt(store_.task(scenario.target_task_id),
                                    store_.solution(scenario.target_task_id),
                                    *inferred.type_id, rng, sample_count);
}

const std::string& PerfectOracle::name() const {
  static const std::string n = "PerfectOracle";
  return n;
}

std::size_t PerfectOracle::choose(const DiscriminativeInstance& instance,
                                  RngStream&) {
  return instance.answer_index;
}

}  // namespace ssyn
