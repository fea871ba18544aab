#pragma once

#include <filesystem>
#include <string>

#include "mval/cluster_world.hpp"

namespace mval {

// JSON document {n1, n2, pair_mass: [[...]], label_prob: [[...]]}. Doubles are written
// in shortest round-trip form, so read(write(w)) == w bit for bit.
std::string world_to_json(const ClusterWorld& w);
ClusterWorld world_from_json(const std::string& text);

void write_world(const ClusterWorld& w, const std::filesystem::path& path);
ClusterWorld read_world(const std::filesystem::path& path);

}  // namespace mval
