#include "fpcc/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpcc {

json norm_to_json(NormKind k) {
  if (k.is_max()) return json("inf");
  return json(k.p);
}

NormKind norm_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return NormKind::max();
    throw std::invalid_argument("norm: expected a number or \"inf\"");
  }
  return NormKind::lp(j.get<double>());
}

namespace {

json anchor_func_to_json(const AnchorFunction& f) {
  json j;
  j["type"] = "anchor";
  j["n"] = f.in_dim();
  j["m"] = f.out_dim();
  j["p"] = norm_to_json(f.norm());
  j["lambda"] = f.lambda();
  json anchors = json::array();
  for (const auto& a : f.anchors())
    anchors.push_back(json{{"x", a.x}, {"v", a.v}});
  j["anchors"] = std::move(anchors);
  return j;
}

AnchorFunction anchor_func_from_json(const json& j) {
  std::vector<Anchor> anchors;
  for (const auto& a : j.at("anchors"))
    anchors.push_back(Anchor{a.at("x").get<Vec>(), a.at("v").get<Vec>()});
  return AnchorFunction::create(j.at("n").get<int>(), j.at("m").get<int>(),
                                std::move(anchors), j.at("lambda").get<double>(),
                                norm_from_json(j.at("p")));
}

}  // namespace

json func_to_json(const Func& f) {
  if (auto* a = dynamic_cast<const AnchorFunction*>(&f))
    return anchor_func_to_json(*a);
  if (auto* g = dynamic_cast<const ConcatMeanGA*>(&f))
    return json{{"type", "concat_mean_ga"}, {"inner", func_to_json(*g->inner())}};
  if (auto* g = dynamic_cast<const ConcatMeanGB*>(&f))
    return json{{"type", "concat_mean_gb"}, {"inner", func_to_json(*g->inner())}};
  if (auto* g = dynamic_cast<const MeanCompGA*>(&f))
    return json{{"type", "mean_comp_ga"}, {"inner", func_to_json(*g->inner())}};
  if (auto* g = dynamic_cast<const MeanCompGB*>(&f))
    return json{{"type", "mean_comp_gb"}, {"inner", func_to_json(*g->inner())}};
  if (auto* g = dynamic_cast<const CompConcatGA*>(&f))
    return json{{"type", "comp_concat_ga"}, {"inner", func_to_json(*g->inner())}};
  if (auto* g = dynamic_cast<const CompConcatGB*>(&f))
    return json{{"type", "comp_concat_gb"},
                {"n", g->out_dim() - g->inner()->in_dim()},
                {"inner", func_to_json(*g->inner())}};
  if (auto* g = dynamic_cast<const LocalCompFA*>(&f))
    return json{{"type", "local_fa"},
                {"family", local_family_to_json(*g->family())}};
  if (auto* g = dynamic_cast<const LocalCompFB*>(&f))
    return json{{"type", "local_fb"},
                {"family", local_family_to_json(*g->family())}};
  throw std::invalid_argument("func_to_json: unserializable function kind");
}

FuncPtr func_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "anchor")
    return std::make_shared<AnchorFunction>(anchor_func_from_json(j));
  if (type == "concat_mean_ga")
    return std::make_shared<ConcatMeanGA>(func_from_json(j.at("inner")));
  if (type == "concat_mean_gb")
    return std::make_shared<ConcatMeanGB>(func_from_json(j.at("inner")));
  if (type == "mean_comp_ga")
    return std::make_shared<MeanCompGA>(func_from_json(j.at("inner")));
  if (type == "mean_comp_gb")
    return std::make_shared<MeanCompGB>(func_from_json(j.at("inner")));
  if (type == "comp_concat_ga")
    return std::make_shared<CompConcatGA>(func_from_json(j.at("inner")));
  if (type == "comp_concat_gb")
    return std::make_shared<CompConcatGB>(func_from_json(j.at("inner")),
                                          j.at("n").get<int>());
  if (type == "local_fa")
    return std::make_shared<LocalCompFA>(std::make_shared<LocalFamily>(
        local_family_from_json(j.at("family"))));
  if (type == "local_fb")
    return std::make_shared<LocalCompFB>(std::make_shared<LocalFamily>(
        local_family_from_json(j.at("family"))));
  throw std::invalid_argument("func_from_json: unknown type " + type);
}

json local_family_to_json(const LocalFamily& fam) {
  json j;
  j["N"] = fam.N;
  j["n"] = fam.n;
  j["r"] = fam.r;
  j["lambda"] = fam.lambda;
  j["p"] = norm_to_json(fam.norm);
  json sel;
  if (fam.L.kind == LocalFamily::Selector::Kind::Constant) {
    sel["kind"] = "constant";
    sel["subset"] = fam.L.constant;
  } else {
    sel["kind"] = "cell_hash";
    sel["cells_per_axis"] = fam.L.cells_per_axis;
    sel["seed"] = fam.L.seed;
  }
  j["L"] = std::move(sel);
  json fp = json::array();
  for (const auto& f : fam.fprime) fp.push_back(anchor_func_to_json(f));
  j["fprime"] = std::move(fp);
  auto bits_to_string = [](const std::vector<std::uint8_t>& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) s[i] = '1';
    return s;
  };
  j["x"] = bits_to_string(fam.x);
  j["y"] = bits_to_string(fam.y);
  return j;
}

LocalFamily local_family_from_json(const json& j) {
  LocalFamily fam;
  fam.N = j.at("N").get<int>();
  fam.n = j.at("n").get<int>();
  fam.r = j.at("r").get<int>();
  fam.lambda = j.at("lambda").get<double>();
  fam.norm = norm_from_json(j.at("p"));
  const json& sel = j.at("L");
  const std::string kind = sel.at("kind").get<std::string>();
  if (kind == "constant") {
    fam.L.kind = LocalFamily::Selector::Kind::Constant;
    fam.L.constant = sel.at("subset").get<std::vector<int>>();
  } else if (kind == "cell_hash") {
    fam.L.kind = LocalFamily::Selector::Kind::CellHash;
    fam.L.cells_per_axis = sel.at("cells_per_axis").get<int>();
    fam.L.seed = sel.at("seed").get<std::uint64_t>();
  } else {
    throw std::invalid_argument("local family: unknown selector kind");
  }
  for (const auto& f : j.at("fprime"))
    fam.fprime.push_back(anchor_func_from_json(f));
  auto string_to_bits = [](const std::string& s) {
    std::vector<std::uint8_t> bits(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1')
        throw std::invalid_argument("local family: bit string must be 0/1");
      bits[i] = std::uint8_t(s[i] == '1');
    }
    return bits;
  };
  fam.x = string_to_bits(j.at("x").get<std::string>());
  fam.y = string_to_bits(j.at("y").get<std::string>());
  fam.validate();
  return fam;
}

json instance_to_json(const BrouwerInstance& inst) {
  json j;
  j["format"] = 1;
  j["kind"] = to_string(inst.kind);
  j["p"] = norm_to_json(inst.p);
  j["epsilon"] = inst.epsilon;
  j["lambda_a"] = inst.lambda_a;
  j["lambda_b"] = inst.lambda_b;
  if (inst.kind == BrouwerKind::Local) {
    j["family"] = local_family_to_json(*inst.local);
  } else {
    j["f_a"] = func_to_json(*inst.f_a);
    j["f_b"] = func_to_json(*inst.f_b);
  }
  return j;
}

BrouwerInstance instance_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const NormKind p = norm_from_json(j.at("p"));
  const double eps = j.at("epsilon").get<double>();
  if (kind == "local") {
    auto fam = std::make_shared<LocalFamily>(
        local_family_from_json(j.at("family")));
    return BrouwerInstance::make_local(p, eps, std::move(fam));
  }
  BrouwerKind k;
  if (kind == "comp") k = BrouwerKind::Comp;
  else if (kind == "concat") k = BrouwerKind::Concat;
  else if (kind == "mean") k = BrouwerKind::Mean;
  else throw std::invalid_argument("instance: unknown kind " + kind);
  return BrouwerInstance::make(k, p, eps, j.at("lambda_a").get<double>(),
                               j.at("lambda_b").get<double>(),
                               func_from_json(j.at("f_a")),
                               func_from_json(j.at("f_b")));
}

namespace {

const char* split_to_string(SpernerInstance::Split s) {
  switch (s) {
    case SpernerInstance::Split::Prefix: return "prefix";
    case SpernerInstance::Split::Surplus: return "surplus";
    case SpernerInstance::Split::Three: return "three";
  }
  return "?";
}

SpernerInstance::Split split_from_string(const std::string& s) {
  if (s == "prefix") return SpernerInstance::Split::Prefix;
  if (s == "surplus") return SpernerInstance::Split::Surplus;
  if (s == "three") return SpernerInstance::Split::Three;
  throw std::invalid_argument("sperner instance: unknown split " + s);
}

}  // namespace

json sperner_instance_to_json(const SpernerInstance& inst) {
  json j;
  j["format"] = 1;
  j["d"] = inst.d;
  j["k"] = inst.k;
  j["t"] = inst.t;
  j["split"] = split_to_string(inst.split);
  j["classes"] = inst.classes;
  return j;
}

SpernerInstance sperner_instance_from_json(const json& j) {
  SpernerInstance inst;
  inst.d = j.at("d").get<int>();
  inst.k = j.at("k").get<int>();
  inst.t = j.at("t").get<int>();
  inst.split = split_from_string(j.value("split", "prefix"));
  inst.classes = j.at("classes").get<std::vector<std::vector<long long>>>();
  return inst;
}

json transcript_to_json(const Transcript& t, json output) {
  json j;
  json msgs = json::array();
  for (const auto& m : t.messages)
    msgs.push_back(json{{"from", m.from}, {"bits", m.bits}});
  j["messages"] = std::move(msgs);
  j["total_bits"] = t.total_bits;
  j["rounds"] = t.rounds;
  j["output"] = std::move(output);
  return j;
}

json reduction_record_to_json(const ReductionRecord& rec) {
  json j;
  j["format"] = 1;
  j["kind"] = to_string(rec.kind);
  j["epsilon_scale"] = rec.epsilon_scale;
  j["c"] = rec.c;
  j["source"] = instance_to_json(rec.source);
  j["target_epsilon"] = rec.target.epsilon;
  return j;
}

ReductionRecord reduction_record_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const BrouwerInstance src = instance_from_json(j.at("source"));
  ReductionRecord rec;
  if (kind == "concat_to_mean") rec = concat_to_mean(src);
  else if (kind == "mean_to_comp") rec = mean_to_comp(src);
  else if (kind == "comp_to_concat")
    rec = comp_to_concat(src, j.at("c").get<double>());
  else if (kind == "local_to_comp") rec = local_to_comp(src);
  else throw std::invalid_argument("backmap: unknown reduction kind " + kind);
  return rec;
}

json imitation_game_to_json(const ImitationGame& game,
                            const BrouwerInstance& src) {
  // utilities are recomputed from the source functions, never tabulated
  json j;
  j["format"] = 1;
  j["alpha"] = game.alpha;
  j["n"] = game.grid_x.dim;
  j["m"] = game.grid_y.dim;
  j["source"] = instance_to_json(src);
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

std::string fingerprint(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[std::size_t(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace fpcc
