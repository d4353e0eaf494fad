#pragma once

#include <string>

#include <json.hpp>

#include "hlab/antiramsey.hpp"
#include "hlab/deltasys.hpp"
#include "hlab/forcing.hpp"
#include "hlab/hl.hpp"
#include "hlab/ph.hpp"
#include "hlab/trees.hpp"

namespace hlab {

using Json = nlohmann::ordered_json;

Json to_json(const OrdSet& a);
Json to_json(const TreeShape& s);
Json to_json(const BranchSet& Y);
Json to_json(const GridWitness& w);
Json to_json(const StrongSubtreeWitness& w);
Json to_json(const HLWitness& w);
Json to_json(const HLDerivation& r);
Json to_json(const Family& fam);
Json to_json(const UniformCertificate& c);
Json to_json(const DeltaViolation& v);
Json to_json(const ExtractResult& r);
Json to_json(const ArenaDescriptor& a);
Json to_json(const TupleColor& c);
Json to_json(const Refutation& r);
Json to_json(const RamseyResult& r);
Json to_json(const Condition& p);
Json to_json(const PipelineResult& r);
Json to_json(const ColoringOracle& o);
Json to_json(const LevelColoring& g);

Json words_json(const std::vector<Word>& ws);

/// Loaders throw PreconditionError on malformed input.
OrdSet ordset_from_json(const Json& j);
std::vector<Word> words_from_json(const Json& j);
TreeShape shape_from_json(const Json& j);
BranchSet branch_set_from_json(const Json& j);
GridWitness grid_from_json(const Json& j);
HLWitness hl_witness_from_json(const Json& j);
Family family_from_json(const Json& j);
UniformCertificate certificate_from_json(const Json& j);
ArenaDescriptor arena_from_json(const Json& j);
Condition condition_from_json(const Json& j);
ColoringOracle oracle_from_json(const Json& j);
LevelColoring level_coloring_from_json(const Json& j);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);
Json parse_json_file(const std::string& path);
/// Creates parent directories; throws std::runtime_error on I/O failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace hlab
