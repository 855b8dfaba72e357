#include "slapknn/serialize.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace slapknn {

using ordered_json = nlohmann::ordered_json;

namespace {

LabelKind widest_kind(const PrototypeSet& set)
{
  auto rank = [](LabelKind k) { return static_cast<int>(k); };
  LabelKind out = LabelKind::hard;
  for (const auto& p : set.prototypes)
    if (rank(p.label.kind) > rank(out)) out = p.label.kind;
  return out;
}

} // namespace

std::string to_json_string(const PrototypeSet& set, int indent)
{
  ordered_json j;
  j["dim"] = set.dim;
  j["num_classes"] = set.num_classes;
  j["label_kind"] = to_string(widest_kind(set));
  j["class_index_base"] = 0;
  auto protos = ordered_json::array();
  for (const auto& p : set.prototypes) {
    ordered_json entry;
    entry["position"] = p.position;
    entry["label"] = p.label.values;
    protos.push_back(std::move(entry));
  }
  j["prototypes"] = std::move(protos);
  j["name"] = set.name;
  return j.dump(indent) + "\n";
}

PrototypeSet prototype_set_from_json(const std::string& text)
{
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed prototype set JSON: ") + e.what());
  }

  PrototypeSet set;
  try {
    set.dim = j.at("dim").get<std::size_t>();
    set.num_classes = j.at("num_classes").get<std::size_t>();
    const auto kind = label_kind_from_string(j.at("label_kind").get<std::string>());
    if (j.contains("class_index_base") && j["class_index_base"].get<int>() != 0)
      throw Error("only class_index_base 0 is supported");
    for (const auto& entry : j.at("prototypes")) {
      Prototype p;
      p.position = entry.at("position").get<std::vector<double>>();
      p.label = SoftLabel{entry.at("label").get<std::vector<double>>(), kind};
      set.prototypes.push_back(std::move(p));
    }
    set.name = j.value("name", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad prototype set JSON: ") + e.what());
  }
  require_valid(set);
  return set;
}

void save_prototype_set(const PrototypeSet& set, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << to_json_string(set);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

PrototypeSet load_prototype_set(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return prototype_set_from_json(buf.str());
}

} // namespace slapknn
