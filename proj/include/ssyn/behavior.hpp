#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace ssyn {

struct BehaviorType {
  std::string id;
  std::string description;
  std::string template_name;
  nlohmann::json params;
};

// Noise rules shared by every grammar template: an action slot may emit a
// transformed token or split into replication symbols that append tokens.
struct NoiseTail {
  double split = 0.1;         // slot splits into two replication symbols
  double direct = 0.7;        // slot emits its own token
  double rep_continue = 0.4;  // replication symbol splits again / emits own
  double rep_off = 0.1;       // replication symbol emits another token
};

// Registry of behavior types per reference task, loaded from
// behavior_types.json; grammar parameters are data, not code constants.
class BehaviorRegistry {
 public:
  static BehaviorRegistry parse(const std::string& text);
  static BehaviorRegistry load(const std::string& path);

  const std::vector<BehaviorType>& types_for(
      const std::string& reference_task_id) const;
  const BehaviorType& type(const std::string& reference_task_id,
                           const std::string& type_id) const;
  std::vector<std::string> reference_task_ids() const;
  const NoiseTail& noise_tail() const { return noise_; }

 private:
  std::map<std::string, std::vector<BehaviorType>> per_reference_;
  NoiseTail noise_;
};

}  // namespace ssyn
