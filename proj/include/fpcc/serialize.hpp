#pragma once

#include <string>

#include <json.hpp>

#include "fpcc/instance.hpp"
#include "fpcc/reductions.hpp"
#include "fpcc/sperner.hpp"
#include "fpcc/transcript.hpp"

// JSON schemas (all versioned with a top-level "format": 1):
//   function: {"type":"anchor","n","m","p","lambda","anchors":[{"x","v"}]}
//             plus structural wrappers for reduction gadgets
//   brouwer instance: {"format","kind","p","epsilon","lambda_a","lambda_b",
//                      "f_a","f_b"} or {"kind":"local","family":{...}}
//   sperner instance: {"format","d","k","t","split","classes":[[ids]...]}
//   transcript: {"messages":[{"from","bits"}],"total_bits","rounds","output"}
//   backmap: {"format","kind","epsilon_scale","c","source":{instance},
//             "target_epsilon"}
// Doubles round-trip value-exactly (shortest decimal that reparses to the
// same bits); p is a number or the string "inf".

namespace fpcc {

using nlohmann::json;

json norm_to_json(NormKind k);
NormKind norm_from_json(const json& j);

json func_to_json(const Func& f);
FuncPtr func_from_json(const json& j);

json local_family_to_json(const LocalFamily& fam);
LocalFamily local_family_from_json(const json& j);

json instance_to_json(const BrouwerInstance& inst);
BrouwerInstance instance_from_json(const json& j);

json sperner_instance_to_json(const SpernerInstance& inst);
SpernerInstance sperner_instance_from_json(const json& j);

json transcript_to_json(const Transcript& t, json output);

json reduction_record_to_json(const ReductionRecord& rec);
ReductionRecord reduction_record_from_json(const json& j);

json imitation_game_to_json(const ImitationGame& game,
                            const BrouwerInstance& src);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// FNV-1a 64-bit over the raw bytes, as 16 hex digits.
std::string fingerprint(const std::string& bytes);

}  // namespace fpcc
