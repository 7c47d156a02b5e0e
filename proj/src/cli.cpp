#include "affmod/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "affmod/ffcount.hpp"
#include "affmod/lift.hpp"
#include "affmod/modification.hpp"
#include "affmod/parse.hpp"
#include "affmod/rectify.hpp"
#include "affmod/transitivity.hpp"

namespace affmod {

using json = nlohmann::ordered_json;

namespace {

struct Incomplete {
  std::string reason;
};

int exit_code_for(ErrKind k) {
  switch (k) {
    case ErrKind::FiberPointsNotFound:
    case ErrKind::NotNilpotentWithin:
    case ErrKind::NoInverseWithinDegree:
    case ErrKind::RootNotInField:
    case ErrKind::BudgetExceeded:
      return 3;
    default:
      return 2;
  }
}

Ctx ctx_from(const json& job) {
  if (!job.contains("vars") || !job["vars"].is_array() || job["vars"].empty())
    fail(ErrKind::InvalidInput, "job needs a nonempty 'vars' array");
  std::vector<std::string> names;
  for (const auto& v : job["vars"]) names.push_back(v.get<std::string>());
  return make_ctx(std::move(names));
}

void require_field_q(const json& job) {
  if (!job.contains("field")) return;
  if (job["field"].is_string() && job["field"].get<std::string>() == "Q") return;
  fail(ErrKind::InvalidInput, "this command runs over the exact rational field only");
}

QPoly jpoly(const json& j, const Ctx& ctx) { return qparse(j.get<std::string>(), ctx); }

std::vector<Rational> jpoint(const json& j, size_t arity) {
  if (!j.is_array() || j.size() != arity)
    fail(ErrKind::InvalidInput, "point arity mismatch");
  std::vector<Rational> out;
  for (const auto& c : j) out.push_back(parse_rational_str(c.get<std::string>()));
  return out;
}

json point_json(const std::vector<Rational>& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back(rational_str(c));
  return a;
}

json xpoint_json(const XPoint& P) { return point_json(P.coords()); }

uint64_t max_cells_budget() {
  if (const char* env = std::getenv("AFFMOD_MAX_CELLS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 100000000ull;
}

json cmd_modify(const json& job) {
  Ctx ctx = ctx_from(job);
  AffineTriple t;
  t.ambient = ctx;
  t.f = jpoly(job.at("f"), ctx);
  if (job.contains("relation")) t.relation = jpoly(job["relation"], ctx);
  for (const auto& b : job.at("center")) t.center_gens.push_back(jpoly(b, ctx));
  std::vector<std::string> new_vars;
  if (job.contains("new_vars"))
    for (const auto& v : job["new_vars"]) new_vars.push_back(v.get<std::string>());
  Certification cert = job.value("assume_prime", false) ? Certification::CallerAsserts
                                                        : Certification::Auto;
  ModPresentation pres = modify(t, cert, new_vars);
  json out;
  out["new_vars"] = pres.new_vars;
  out["equations"] = json::array();
  for (const auto& e : pres.equations) out["equations"].push_back(print_poly(e));
  out["blowdown"] = json::array();
  for (const auto& m : pres.blowdown.images) out["blowdown"].push_back(print_poly(m));
  out["exceptional"] = json::array();
  for (const auto& e : pres.exceptional_eqs) out["exceptional"].push_back(print_poly(e));
  return out;
}

json cmd_strict_transform(const json& job) {
  Ctx ctx = ctx_from(job);
  QPoly g = jpoly(job.at("g"), ctx);
  const auto& imgs_j = job.at("blowdown");
  if (!imgs_j.is_array() || imgs_j.size() != ctx->arity())
    fail(ErrKind::InvalidInput, "blowdown needs one image per variable");
  std::vector<QPoly> imgs;
  for (const auto& s : imgs_j) imgs.push_back(jpoly(s, ctx));
  QPolyMap blow(ctx, ctx, std::move(imgs));
  auto [mu, g1] = strict_transform(g, blow, job.at("exc_var").get<std::string>());
  json out;
  out["mu"] = mu;
  out["g1"] = print_poly(g1);
  return out;
}

json cmd_lift(const json& job) {
  Ctx ctx = ctx_from(job);
  std::string kind = job.value("kind", "derivation");
  json out;
  if (kind == "derivation") {
    AffineTriple t;
    t.ambient = ctx;
    t.f = jpoly(job.at("f"), ctx);
    for (const auto& b : job.at("center")) t.center_gens.push_back(jpoly(b, ctx));
    Certification cert = job.value("assume_prime", false) ? Certification::CallerAsserts
                                                          : Certification::Auto;
    ModPresentation pres = modify(t, cert);
    std::vector<QPoly> imgs;
    for (const auto& s : job.at("derivation")) imgs.push_back(jpoly(s, ctx));
    Derivation d(ctx, std::move(imgs));
    Derivation lifted = lift_derivation(t, pres, d);
    out["new_vars"] = pres.new_vars;
    out["lifted"] = json::array();
    for (const auto& m : lifted.images) out["lifted"].push_back(print_poly(m));
  } else if (kind == "auto") {
    const auto& imgs_j = job.at("map");
    if (ctx->arity() != 3 || imgs_j.size() != 3)
      fail(ErrKind::InvalidInput, "lift kind=auto expects a three-variable map");
    std::vector<QPoly> imgs;
    for (const auto& s : imgs_j) imgs.push_back(jpoly(s, ctx));
    QPolyMap lifted = lift_auto_G(QPolyMap(ctx, ctx, std::move(imgs)));
    out["lifted"] = json::array();
    for (const auto& m : lifted.images) out["lifted"].push_back(print_poly(m));
  } else {
    fail(ErrKind::InvalidInput, "lift kind must be 'derivation' or 'auto'");
  }
  return out;
}

json cmd_flow(const json& job) {
  Ctx ctx = ctx_from(job);
  std::vector<QPoly> imgs;
  for (const auto& s : job.at("derivation")) imgs.push_back(jpoly(s, ctx));
  Derivation d(ctx, std::move(imgs));
  uint32_t max_iter = job.value("max_iter", 64u);
  NilpotencyCertificate cert = check_lnd(d, max_iter);
  QPolyMap m;
  if (job.at("t").is_object()) {
    m = exp_flow_symbolic(d, cert, job["t"].at("symbolic").get<std::string>());
  } else {
    m = exp_flow(d, cert, parse_rational_str(job.at("t").get<std::string>()));
  }
  json out;
  out["orders"] = cert.orders;
  out["map"] = json::array();
  for (const auto& img : m.images) out["map"].push_back(print_poly(img));
  return out;
}

json cmd_transitivity(const json& job) {
  Ctx ctx = ctx_from(job);
  HypersurfaceX X = HypersurfaceX::make(jpoly(job.at("p"), ctx));
  auto read_points = [&](const json& arr) {
    std::vector<XPoint> pts;
    for (const auto& pj : arr) {
      auto c = jpoint(pj, X.k() + 2);
      std::vector<Rational> x(c.begin(), c.begin() + X.k());
      pts.push_back(make_xpoint(X, x, c[X.k()], c[X.k() + 1]));
    }
    return pts;
  };
  auto sources = read_points(job.at("sources"));
  auto targets = read_points(job.at("targets"));
  TransitivityPlan plan = solve(X, sources, targets);
  if (!verify_plan(X, plan, sources, targets))
    fail(ErrKind::InvalidInput, "internal: plan failed re-verification");
  json out;
  out["word"] = word_to_text(plan.word);
  out["stats"] = {{"word_length", plan.word_length},
                  {"max_coeff_bits", plan.max_coeff_bits}};
  out["trace"] = json::array();
  for (const auto& st : plan.trace) {
    json stage;
    stage["name"] = st.name;
    stage["word_begin"] = st.word_begin;
    stage["word_end"] = st.word_end;
    stage["points"] = json::array();
    for (const auto& P : st.points_after) stage["points"].push_back(xpoint_json(P));
    out["trace"].push_back(stage);
  }
  return out;
}

json cmd_rectify(const json& job) {
  std::string mode = job.value("mode", "n1");
  Ctx c2 = make_ctx({"x", "y"});
  json out;
  if (mode == "n1") {
    QPoly p = jpoly(job.at("p"), c2);
    QPoly g = jpoly(job.at("g"), c2);
    RectifyWord w = rectify_n1(p, g);
    out["word"] = rectify_word_to_text(w);
    out["plane_c"] = rational_str(w.plane_c);
  } else if (mode == "pair") {
    QPoly f = jpoly(job.at("f"), c2);
    QPoly g = jpoly(job.at("g"), c2);
    std::optional<QPoly> hint;
    if (job.contains("f1")) hint = jpoly(job["f1"], c2);
    PairRectification pr = rectify_pair(f, g, hint, job.value("degree_bound", 0l));
    out["alpha"] = json::array();
    for (const auto& m : pr.alpha.images) out["alpha"].push_back(print_poly(m));
    out["p_of_x"] = print_poly(pr.p_univar);
  } else {
    fail(ErrKind::InvalidInput, "rectify mode must be 'n1' or 'pair'");
  }
  return out;
}

json cmd_count(const json& job, uint64_t seed, int* exit_code) {
  Ctx ctx = ctx_from(job);
  uint32_t q = job.at("q").get<uint32_t>();
  uint64_t budget = max_cells_budget();
  std::string mode = job.value("mode", "uv");
  json out;
  if (mode == "uv") {
    CountReport rep = uv_identity(jpoly(job.at("p"), ctx), q, budget);
    out["q"] = rep.q;
    out["k"] = rep.k;
    out["N_X"] = rep.n_x;
    out["N_0"] = rep.n_zero;
    out["predicted"] = rep.predicted;
    out["match"] = rep.match;
    if (!rep.match && exit_code) *exit_code = 1;
  } else if (mode == "points") {
    std::vector<QPoly> eqs;
    for (const auto& e : job.at("eqs")) eqs.push_back(jpoly(e, ctx));
    out["count"] = count_points(eqs, q, budget);
  } else if (mode == "witness") {
    std::vector<QPoly> eqs;
    for (const auto& e : job.at("eqs")) eqs.push_back(jpoly(e, ctx));
    auto w = singular_witness(eqs, q, job.value("budget", 100000ull), seed);
    out["found"] = w.has_value();
    if (w) out["witness"] = *w;
  } else {
    fail(ErrKind::InvalidInput, "count mode must be 'uv', 'points' or 'witness'");
  }
  return out;
}

json cmd_gallery(const json& job) {
  GalleryParams params;
  params.k = job.value("k", 0l);
  params.l = job.value("l", 0l);
  params.s = job.value("s", 0l);
  params.m = job.value("m", 0l);
  if (job.contains("ps")) {
    Ctx ctx = ctx_from(job);
    for (const auto& s : job["ps"]) params.ps.push_back(jpoly(s, ctx));
  }
  if (job.contains("exponents"))
    for (const auto& e : job["exponents"]) params.exponents.push_back(e.get<long>());
  GalleryResult res = gallery(job.at("name").get<std::string>(), params);
  json out;
  out["polys"] = json::array();
  for (const auto& p : res.polys) out["polys"].push_back(print_poly(p));
  if (res.presentation) {
    out["new_vars"] = res.presentation->new_vars;
    out["vars"] = res.presentation->extended->names();
  } else if (!res.polys.empty()) {
    out["vars"] = res.polys[0].ctx()->names();
  }
  return out;
}

json cmd_verify(const json& job, int* exit_code) {
  std::string kind = job.value("kind", "transitivity");
  json out;
  if (kind == "transitivity") {
    Ctx ctx = ctx_from(job);
    HypersurfaceX X = HypersurfaceX::make(jpoly(job.at("p"), ctx));
    AutoWord w = word_from_text(job.at("word").get<std::string>(), X.xctx);
    auto read_points = [&](const json& arr) {
      std::vector<XPoint> pts;
      for (const auto& pj : arr) {
        auto c = jpoint(pj, X.k() + 2);
        std::vector<Rational> x(c.begin(), c.begin() + X.k());
        pts.push_back(make_xpoint(X, x, c[X.k()], c[X.k() + 1]));
      }
      return pts;
    };
    auto sources = read_points(job.at("sources"));
    auto targets = read_points(job.at("targets"));
    TransitivityPlan plan;
    plan.word = w;
    bool ok = verify_plan(X, plan, sources, targets);
    out["verified"] = ok;
    if (!ok && exit_code) *exit_code = 1;
  } else if (kind == "rectify") {
    Ctx c2 = make_ctx({"x", "y"});
    QPoly f = jpoly(job.at("f"), c2);
    QPoly g = jpoly(job.at("g"), c2);
    BinomialSurface s = BinomialSurface::make(f, g, 1);
    RectifyWord w = rectify_word_from_text(job.at("word").get<std::string>(), s.ctx3);
    bool ok = verify_rectified(s, w);
    out["verified"] = ok;
    if (!ok && exit_code) *exit_code = 1;
  } else if (kind == "word-roundtrip") {
    Ctx ctx = ctx_from(job);
    AutoWord w = word_from_text(job.at("word").get<std::string>(), ctx);
    bool ok = word_to_text(w) == job.at("word").get<std::string>();
    out["verified"] = ok;
    if (!ok && exit_code) *exit_code = 1;
  } else {
    fail(ErrKind::InvalidInput, "verify kind must be 'transitivity', 'rectify' or 'word-roundtrip'");
  }
  return out;
}

} // namespace

int run_job_text(const std::string& job_json, std::string& report_json, uint64_t seed,
                 bool timing) {
  json report;
  int code = 0;
  auto t0 = std::chrono::steady_clock::now();
  try {
    json job = json::parse(job_json);
    std::string command = job.at("command").get<std::string>();
    require_field_q(job);
    json outputs;
    if (command == "modify") outputs = cmd_modify(job);
    else if (command == "strict-transform") outputs = cmd_strict_transform(job);
    else if (command == "lift") outputs = cmd_lift(job);
    else if (command == "flow") outputs = cmd_flow(job);
    else if (command == "transitivity") outputs = cmd_transitivity(job);
    else if (command == "rectify") outputs = cmd_rectify(job);
    else if (command == "count") outputs = cmd_count(job, seed, &code);
    else if (command == "gallery") outputs = cmd_gallery(job);
    else if (command == "verify") outputs = cmd_verify(job, &code);
    else fail(ErrKind::InvalidInput, "unknown command '" + command + "'");
    report["status"] = code == 0 ? "ok" : "verify-failed";
    report["outputs"] = outputs;
  } catch (const Error& e) {
    code = exit_code_for(e.kind);
    report["status"] = code == 3 ? "incomplete" : "input-error";
    report["error"] = {{"kind", err_kind_name(e.kind)}, {"message", e.what()}};
    if (e.pos >= 0) report["error"]["position"] = e.pos;
  } catch (const json::exception& e) {
    code = 2;
    report["status"] = "input-error";
    report["error"] = {{"kind", "JsonError"}, {"message", e.what()}};
  }
  if (timing) {
    auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    report["timing_ms"] = dt;
  }
  report_json = report.dump(2) + "\n";
  return code;
}

int run(const std::vector<std::string>& args) {
  std::string job_path, out_path;
  uint64_t seed = 1;
  bool timing = false;
  std::string command;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--job" && i + 1 < args.size()) job_path = args[++i];
    else if (a == "--out" && i + 1 < args.size()) out_path = args[++i];
    else if (a == "--seed" && i + 1 < args.size()) seed = std::stoull(args[++i]);
    else if (a == "--timing") timing = true;
    else if (!a.empty() && a[0] != '-' && command.empty()) command = a;
    else {
      std::cerr << "unknown argument: " << a << "\n";
      return 2;
    }
  }
  if (command.empty() || job_path.empty()) {
    std::cerr << "usage: affmod <command> --job <path> [--out <path>] [--seed <n>] [--timing]\n"
              << "commands: modify strict-transform lift flow transitivity rectify count "
                 "gallery verify\n";
    return 2;
  }
  std::ifstream in(job_path);
  if (!in) {
    std::cerr << "cannot read job file: " << job_path << "\n";
    return 2;
  }
  std::string job_text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  // The job file's command must match the subcommand.
  try {
    json job = json::parse(job_text);
    if (!job.contains("command")) job["command"] = command;
    else if (job["command"] != command) {
      std::cerr << "job command mismatch\n";
      return 2;
    }
    job_text = job.dump();
  } catch (const json::exception& e) {
    std::string report = std::string("{\n  \"status\": \"input-error\",\n  \"error\": ") +
                         "{\"kind\": \"JsonError\"}\n}\n";
    if (!out_path.empty()) std::ofstream(out_path) << report;
    else std::cout << report;
    return 2;
  }

  std::string report;
  int code = run_job_text(job_text, report, seed, timing);
  if (!out_path.empty()) std::ofstream(out_path) << report;
  else std::cout << report;
  return code;
}

} // namespace affmod
