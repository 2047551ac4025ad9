#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ssyn/benchmark.hpp"
#include "ssyn/edit_distance.hpp"
#include "ssyn/rng.hpp"
#include "ssyn/symss.hpp"

namespace ssyn {

// A discriminative technique; synthesis capability is optional.
class Technique {
 public:
  virtual ~Technique() = default;
  virtual const std::string& name() const = 0;

  // False when required external inputs are missing; the harness records a
  // "not configured" status instead of failing the run.
  virtual bool configured() const { return true; }

  virtual std::size_t choose(const DiscriminativeInstance& instance,
                             RngStream& rng) = 0;

  // Hyperparameter grid searched on the tuning fold; empty means none.
  virtual std::vector<double> tuning_grid() const { return {}; }
  virtual void set_hyperparameter(double) {}

  virtual bool can_synthesize() const { return false; }
  virtual std::vector<SynthesizedCode> synthesize(const Scenario&, RngStream&,
                                                  int /*sample_count*/) {
    throw std::runtime_error("technique '" + name() +
                             "' has no synthesis capability");
  }
};

// Uniformly random option.
class RandD : public Technique {
 public:
  const std::string& name() const override;
  std::size_t choose(const DiscriminativeInstance& instance,
                     RngStream& rng) override;
};

// Option nearest to the observed attempt under the tree edit distance.
class EditD : public Technique {
 public:
  const std::string& name() const override;
  std::size_t choose(const DiscriminativeInstance& instance,
                     RngStream& rng) override;
};

// Convex combination of the edit distance and an externally supplied
// embedding distance matrix keyed by canonical code serializations.
class EditEmbD : public Technique {
 public:
  EditEmbD() = default;
  explicit EditEmbD(DistanceMatrix matrix) : matrix_(std::move(matrix)) {}

  const std::string& name() const override;
  bool configured() const override { return matrix_.has_value(); }
  std::size_t choose(const DiscriminativeInstance& instance,
                     RngStream& rng) override;
  std::vector<double> tuning_grid() const override;
  void set_hyperparameter(double alpha) override { alpha_ = alpha; }
  double alpha() const { return alpha_; }

 private:
  std::optional<DistanceMatrix> matrix_;
  double alpha_ = 1.0;
};

// Grammar-based pipeline: infer the behavior type from the observed attempt
// on the reference task, then score candidate codes (or sample new ones)
// under that type's grammar on the target task.
class SymSS : public Technique {
 public:
  explicit SymSS(const BenchmarkStore& store);

  const std::string& name() const override;
  std::size_t choose(const DiscriminativeInstance& instance,
                     RngStream& rng) override;
  bool can_synthesize() const override { return true; }
  std::vector<SynthesizedCode> synthesize(const Scenario& scenario,
                                          RngStream& rng,
                                          int sample_count) override;

  InferenceResult infer(const std::string& reference_task_id,
                        const ProgramAst& observed) const;

 private:
  const BenchmarkStore& store_;
  std::map<std::string, GrammarCreator> creators_;
  mutable std::map<std::string, InferenceResult> inference_cache_;
  mutable std::map<std::string, std::optional<double>> option_score_cache_;
};

// Test helper that reads the hidden answer; wiring check only.
class PerfectOracle : public Technique {
 public:
  const std::string& name() const override;
  std::size_t choose(const DiscriminativeInstance& instance,
                     RngStream& rng) override;
};

}  // namespace ssyn
