#pragma once

#include "slapknn/core.hpp"

#include <filesystem>
#include <string>

namespace slapknn {

/// JSON layout:
///   {"dim":2,"num_classes":3,"label_kind":"probabilistic","class_index_base":0,
///    "prototypes":[{"position":[0,0],"label":[0.6,0.4,0]}, ...],"name":"..."}
/// label_kind is the most general kind present in the set
/// (hard < probabilistic < unrestricted). Loading validates the set.
std::string to_json_string(const PrototypeSet& set, int indent = 2);
PrototypeSet prototype_set_from_json(const std::string& text);

void save_prototype_set(const PrototypeSet& set, const std::filesystem::path& path);
PrototypeSet load_prototype_set(const std::filesystem::path& path);

} // namespace slapknn
