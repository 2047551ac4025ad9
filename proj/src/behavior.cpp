#include "ssyn/behavior.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ssyn {

BehaviorRegistry BehaviorRegistry::parse(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  BehaviorRegistry reg;
  const auto& noise = j.at("noise_tail");
  reg.noise_.split = noise.at("split").get<double>();
  reg.noise_.direct = noise.at("direct").get<double>();
  reg.noise_.rep_continue = noise.at("rep_continue").get<double>();
  reg.noise_.rep_off = noise.at("rep_off").get<double>();
  for (const auto& [ref_id, types] : j.at("reference_tasks").items()) {
    std::vector<BehaviorType> list;
    std::set<std::string> seen;
    for (const auto& t : types) {
      BehaviorType bt;
      bt.id = t.at("id").get<std::string>();
      bt.description = t.at("description").get<std::string>();
      bt.template_name = t.at("template").get<std::string>();
      bt.params = t.value("params", nlohmann::json::object());
      if (!seen.insert(bt.id).second) {
        throw std::runtime_error("duplicate behavior type id: " + bt.id);
      }
      list.push_back(std::move(bt));
    }
    if (list.size() != 6) {
      throw std::runtime_error("reference task " + ref_id +
                               " must register exactly 6 behavior types");
    }
    reg.per_reference_[ref_id] = std::move(list);
  }
  return reg;
}

BehaviorRegistry BehaviorRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open registry file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::vector<BehaviorType>& BehaviorRegistry::types_for(
    const std::string& reference_task_id) const {
  const auto it = per_reference_.find(reference_task_id);
  if (it == per_reference_.end()) {
    throw std::out_of_range("no behavior types for reference task: " +
                            reference_task_id);
  }
  return it->second;
}

const BehaviorType& BehaviorRegistry::type(
    const std::string& reference_task_id, const std::string& type_id) const {
  for (const BehaviorType& t : types_for(reference_task_id)) {
    if (t.id == type_id) return t;
  }
  throw std::out_of_range("behavior type '" + type_id +
                          "' is not registered for " + reference_task_id);
}

std::vector<std::string> BehaviorRegistry::reference_task_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : per_reference_) out.push_back(id);
  return out;
}

}  // namespace ssyn
