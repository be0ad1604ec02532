#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pfaff/charp.hpp"
#include "pfaff/document.hpp"
#include "pfaff/gallery.hpp"
#include "pfaff/gv.hpp"
#include "pfaff/transverse.hpp"

namespace pfaff::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string printed(const Value& v) { return print_value(v); }

bool usage_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::Usage:
    case ErrorKind::UnknownVariable:
    case ErrorKind::ChartMismatch:
    case ErrorKind::CharacteristicMismatch:
    case ErrorKind::DegreeMismatch:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ZeroForm:
    case ErrorKind::ZeroFunction:
    case ErrorKind::SequenceTooShort:
      return true;
    default:
      return false;
  }
}

Document load(const std::string& path) {
  std::stringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Usage, "cannot read '" + path + "'");
    buffer << in.rdbuf();
  }
  return parse_document(buffer.str());
}

// The named binding, or the last binding accepted by the predicate.
template <class Accept>
const Value& pick(const Document& doc, const std::string& name, std::string_view what, Accept accept) {
  if (!name.empty()) {
    const Value* v = doc.find(name);
    if (!v) fail(ErrorKind::Usage, "no binding named '" + name + "'");
    return *v;
  }
  const Value* found = nullptr;
  for (const auto& b : doc.bindings())
    if (accept(b.value)) found = &b.value;
  if (!found) fail(ErrorKind::Usage, "document has no " + std::string(what));
  return *found;
}

DiffForm pick_form(const Document& doc, const std::string& name) {
  auto is_one_form = [](const Value& v) {
    auto f = std::get_if<DiffForm>(&v);
    return f && f->degree() == 1;
  };
  return as_form(pick(doc, name, "1-form", is_one_form), "binding");
}

GVSequence pick_sequence(const Document& doc, const std::string& name) {
  auto is_sequence = [](const Value& v) { return std::holds_alternative<GVSequence>(v); };
  return as_sequence(pick(doc, name, "sequence", is_sequence), "binding");
}

Triple pick_triple(const Document& doc, const std::string& name) {
  auto is_triple = [](const Value& v) { return std::holds_alternative<Triple>(v); };
  return as_triple(pick(doc, name, "triple", is_triple), "binding");
}

RatFn function_arg(const std::string& text, const Document& doc, std::string_view what) {
  return as_function(parse_expression(text, doc), what);
}

void defect(Report& r, std::string name, const DiffForm& value) {
  if (!value.is_zero()) r.holds = false;
  r.defects.emplace_back(std::move(name), printed(value));
}

void certificate(Report& r, std::string name, std::string value) {
  r.certificates.emplace_back(std::move(name), std::move(value));
}

void add_defects(Report& r, const DefectReport& d) {
  for (std::size_t k = 0; k < d.defects.size(); ++k) defect(r, "order " + std::to_string(k + 1), d.defects[k]);
}

Report check_integrable(const Document& doc, const std::string& name) {
  Report r{"check-integrable"};
  DiffForm w = pick_form(doc, name);
  certificate(r, "w", printed(w));
  defect(r, "w ^ dw", wedge(w, ext_d(w)));
  return r;
}

Report gv_generate(const Document& doc, const std::string& name, const std::string& field, std::size_t order) {
  Report r{"gv generate"};
  DiffForm w = pick_form(doc, name);
  VectorField x = as_field(parse_expression(field, doc), "--field");
  GVSequence s = gv_from_field(w, x, order);
  certificate(r, "sequence", printed(s));
  add_defects(r, gv_verify(s));
  return r;
}

Report gv_check(const Document& doc, const std::string& name) {
  Report r{"gv verify"};
  GVSequence s = pick_sequence(doc, name);
  add_defects(r, gv_verify(s));
  certificate(r, "length", std::to_string(s.support_length()));
  if (s.declared_length()) {
    FiniteReport f = finite_gv_verify(s);
    for (auto [k, l] : f.tangency_failures) {
      r.holds = false;
      r.defects.emplace_back("w" + std::to_string(k) + " ^ w" + std::to_string(l), printed(wedge(s[k], s[l])));
    }
    for (std::size_t k = 0; k < f.relation_defects.size(); ++k)
      defect(r, "reduced relation " + std::to_string(k), f.relation_defects[k]);
  }
  return r;
}

Report gv_transform(const Document& doc, const std::string& name, const std::string& text, std::size_t k,
                    bool shift) {
  Report r{shift ? "gv shift" : "gv rescale"};
  GVSequence s = pick_sequence(doc, name);
  RatFn f = function_arg(text, doc, "--f");
  GVSequence t = shift ? gv_shift(s, f, k) : gv_rescale(s, f);
  certificate(r, "sequence", printed(t));
  add_defects(r, gv_verify(t));
  defect(r, "w~0 ^ w0", wedge(t[0], s[0]));
  return r;
}

Report gv_classify(const Document& doc, const std::string& name) {
  Report r{"gv classify"};
  GVSequence s = pick_sequence(doc, name);
  Classification c = finite_gv_classify(s);
  r.trace = c.trace;
  certificate(r, "kind", std::string(to_string(c.kind)));
  if (c.affine) {
    certificate(r, "form", printed(c.affine->form));
    certificate(r, "connection", printed(c.affine->connection));
    if (!verify_affine(*c.affine, s[0])) {
      r.holds = false;
      r.defects.emplace_back("affine relations", "fail");
    }
  } else if (c.witness) {
    certificate(r, "g", c.witness->to_string());
    const DiffForm& last = s[s.support_length() - 1];
    defect(r, "dg ^ wN", wedge(ext_d(DiffForm::function(*c.witness)), last));
  } else {
    r.holds = false;
    r.defects.emplace_back("inconclusive", c.reason);
  }
  return r;
}

Report gv_pullback(const Document& doc, const std::string& name, const std::string& text, std::size_t degree) {
  Report r{"gv pullback"};
  GVSequence s = pick_sequence(doc, name);
  PullbackDescription p = finite_gv_pullback(s, function_arg(text, doc, "--g"), degree);
  certificate(r, "g", p.g.to_string());
  certificate(r, "h", p.h.to_string());
  certificate(r, "r", std::to_string(p.r));
  certificate(r, "target", printed(p.target));
  certificate(r, "r h w0", printed(p.scaled_leading));
  if (!p.verified) {
    r.holds = false;
    r.defects.emplace_back("same foliation", "fail");
  }
  return r;
}

void add_triple_defects(Report& r, const Triple& t) {
  TripleReport rep = triple_verify(t);
  defect(r, "dw0 - w0 ^ w1", rep.defects[0]);
  defect(r, t.convention() == Convention::Full ? "dw1 - 2 w0 ^ w2" : "dw1 - w0 ^ w2", rep.defects[1]);
  defect(r, "dw2 - w1 ^ w2", rep.defects[2]);
}

Report triple_check(const Document& doc, const std::string& name) {
  Report r{"triple verify"};
  Triple t = pick_triple(doc, name);
  add_triple_defects(r, t);
  certificate(r, "structure", std::string(to_string(classify_structure(t))));
  return r;
}

Report triple_move(const Document& doc, const std::string& name, const std::string& f, const std::string& g) {
  Report r{"triple gauge"};
  if (f.empty() == g.empty()) fail(ErrorKind::Usage, "give exactly one of --f and --g");
  Triple t = pick_triple(doc, name);
  GaugeMove move = f.empty() ? GaugeMove::g_move(function_arg(g, doc, "--g"), t.convention())
                             : GaugeMove::f_move(function_arg(f, doc, "--f"), t.convention());
  Triple out = triple_gauge(t, move);
  certificate(r, "triple", printed(out));
  add_triple_defects(r, out);
  return r;
}

Report reduce_deg2(const Document& doc, const std::string& name) {
  Report r{"reduce-deg2"};
  std::vector<DiffForm> parts;
  auto bound_form = [&](const char* n) -> const DiffForm* {
    const Value* v = doc.find(n);
    return v ? std::get_if<DiffForm>(v) : nullptr;
  };
  if (name.empty() && bound_form("w1") && bound_form("w2")) {
    parts = {DiffForm(doc.chart(), 1), *bound_form("w1"), *bound_form("w2"),
             bound_form("w3") ? *bound_form("w3") : DiffForm(doc.chart(), 1)};
  } else {
    parts = homogeneous_parts(pick_form(doc, name));
    if (parts.size() > 4) fail(ErrorKind::InvalidArgument, "form has degree > 3 at the origin");
    parts.resize(4, DiffForm(doc.chart(), 1));
    if (!parts[0].is_zero()) fail(ErrorKind::InvalidArgument, "the origin is not a singular point");
  }
  ReductionReport rep = degree2_reduce(parts[1], parts[2], parts[3]);
  certificate(r, "branch", std::string(to_string(rep.branch)));
  certificate(r, "f0", rep.f0.to_string());
  certificate(r, "f1", rep.f1.to_string());
  if (rep.s) certificate(r, "s", rep.s->to_string());
  certificate(r, "w~1", printed(rep.w1));
  certificate(r, "w~2", printed(rep.w2));
  certificate(r, "w~3", printed(rep.w3));
  if (rep.vertical) certificate(r, "vertical", rep.vertical->to_string());
  for (std::size_t k = 0; k < rep.coefficients.size(); ++k)
    certificate(r, "coefficient " + std::to_string(k), printed(rep.coefficients[k]));
  certificate(r, "ode", printed(rep.ode));
  if (!rep.certified) {
    r.holds = false;
    r.defects.emplace_back("pullback ^ ode", "nonzero");
  }
  return r;
}

Report charp_factor(const Document& doc, const std::string& name, const std::vector<std::string>& frame) {
  Report r{"charp factor"};
  DiffForm w = pick_form(doc, name);
  if (w.chart()->characteristic() == 0) fail(ErrorKind::InvalidArgument, "charp factor needs a chart over F_p");
  std::optional<std::vector<RatFn>> fs;
  if (!frame.empty()) {
    fs.emplace();
    for (const auto& text : frame) fs->push_back(function_arg(text, doc, "--frame"));
  }
  try {
    IntegratingFactor f = integrating_factor(w, fs);
    certificate(r, "case", "factor");
    certificate(r, "F", f.factor.to_string());
    certificate(r, "index", std::to_string(f.index));
    defect(r, "d(F w)", ext_d(f.factor * w));
    CandidateReport cands = invariant_hypersurface_candidates(f.factor, w);
    for (const auto& c : cands.candidates)
      certificate(r, "candidate", c.factor.to_string() + " multiplicity " + std::to_string(c.multiplicity) +
                                      (c.verified ? " invariant" : " unchecked"));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PClosedCase) throw;
    certificate(r, "case", "p-closed");
    r.trace.push_back(e.what());
  }
  return r;
}

int charp_batch_run(unsigned long p, std::size_t count, std::uint64_t seed, unsigned degree, bool json,
                    std::ostream& out) {
  bool all = true;
  for (const auto& rec : charp_batch(p, seed, count, degree)) {
    all = all && rec.verified;
    std::string outcome = rec.p_closed ? "p-closed" : "factor";
    if (json) {
      Json j;
      j["instance"] = rec.instance;
      j["p"] = p;
      j["form"] = printed(rec.form);
      j["outcome"] = outcome;
      if (rec.factor) j["factor"] = rec.factor->to_string();
      j["verified"] = rec.verified;
      out << j.dump() << "\n";
    } else {
      out << rec.instance << " " << outcome;
      if (rec.factor) out << " F = " << rec.factor->to_string();
      out << (rec.verified ? " verified" : " FAILED") << "\n";
    }
  }
  return all ? Holds : Fails;
}

Report fixture_report(const std::string& name) {
  FixtureReport f = fixture_verify(name);
  Report r{"fixture " + f.name};
  for (const auto& c : f.checks) {
    if (!c.holds) r.holds = false;
    r.defects.emplace_back(c.name, c.holds ? "0" : c.defect.empty() ? "fails" : c.defect);
  }
  r.certificates = f.certificates;
  return r;
}

Report error_report(const std::string& name, const Error& e) {
  Report r{name};
  r.holds = false;
  r.defects.emplace_back(std::string(to_string(e.kind())), e.what());
  return r;
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << r.name << ": " << (r.holds ? "holds" : "fails") << "\n";
  for (const auto& [k, v] : r.certificates) out << "  certificate " << k << ": " << v << "\n";
  for (const auto& [k, v] : r.defects) out << "  defect " << k << ": " << v << "\n";
  for (const auto& t : r.trace) out << "  trace: " << t << "\n";
  return out.str();
}

std::string render_json(const Report& r) {
  auto pairs = [](const std::vector<std::pair<std::string, std::string>>& items) {
    Json a = Json::array();
    for (const auto& [k, v] : items) a.push_back({{"name", k}, {"value", v}});
    return a;
  };
  Json j;
  j["name"] = r.name;
  j["outcome"] = r.holds ? "holds" : "fails";
  j["defects"] = pairs(r.defects);
  j["certificates"] = pairs(r.certificates);
  j["trace"] = r.trace;
  return j.dump(2) + "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symbolic verification of codimension-one foliations", "pfaff"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Machine-readable report");

  std::string file, name, field, expr, g_expr, fixture;
  std::vector<std::string> frame;
  std::size_t order = 4, k = 1, degree = 2, count = 200;
  unsigned long p = 2;
  std::uint64_t seed = 1;
  unsigned poly_degree = 3;
  bool all = false;

  auto with_file = [&](CLI::App* sub) {
    sub->add_option("FILE", file, "Document file, - for stdin")->required();
    sub->add_option("--name", name, "Binding to use (default: the last one of the needed kind)");
    return sub;
  };

  auto* integrable = with_file(app.add_subcommand("check-integrable", "Check w ^ dw = 0"));

  auto* gv = app.add_subcommand("gv", "Godbillon-Vey sequences");
  gv->require_subcommand(1);
  auto* gv_gen = with_file(gv->add_subcommand("generate", "Sequence (L_X)^k w"));
  gv_gen->add_option("--field", field, "Vector field X with w(X) = 1")->required();
  gv_gen->add_option("--order", order, "Highest k");
  auto* gv_ver = with_file(gv->add_subcommand("verify", "Integrability defects"));
  auto* gv_res = with_file(gv->add_subcommand("rescale", "z = f t"));
  gv_res->add_option("--f", expr, "Function f")->required();
  auto* gv_sh = with_file(gv->add_subcommand("shift", "z = t + f t^(k+1) + ..."));
  gv_sh->add_option("--f", expr, "Function f")->required();
  gv_sh->add_option("--k", k, "Shift index");
  auto* gv_cls = with_file(gv->add_subcommand("classify", "Finite-length classification"));
  auto* gv_pb = with_file(gv->add_subcommand("pullback", "Pull-back description"));
  gv_pb->add_option("--g", expr, "Closed-kernel witness g")->required();
  gv_pb->add_option("--degree", degree, "Polynomial degree bound in g");

  auto* triple = app.add_subcommand("triple", "Projective triples");
  triple->require_subcommand(1);
  auto* tr_ver = with_file(triple->add_subcommand("verify", "Triple relations"));
  auto* tr_gauge = with_file(triple->add_subcommand("gauge", "Apply an F or G move"));
  tr_gauge->add_option("--f", expr, "F move by f");
  tr_gauge->add_option("--g", g_expr, "G move by g");

  auto* reduce = with_file(app.add_subcommand("reduce-deg2", "Degree-2 reduction at the origin"));

  auto* charp = app.add_subcommand("charp", "Characteristic p");
  charp->require_subcommand(1);
  auto* cp_factor = with_file(charp->add_subcommand("factor", "Integrating factor"));
  cp_factor->add_option("--frame", frame, "Functions f_1 .. f_(m-1) of the dual frame (default: coordinates)");
  auto* cp_batch = charp->add_subcommand("batch", "Seeded random batch, one line per instance");
  cp_batch->add_option("--p", p, "Characteristic")->required();
  cp_batch->add_option("--count", count, "Number of instances");
  cp_batch->add_option("--seed", seed, "Seed")->required();
  cp_batch->add_option("--degree", poly_degree, "Coefficient degree");

  auto* fix = app.add_subcommand("fixture", "Named gallery fixtures");
  fix->require_subcommand(1);
  auto* fx_list = fix->add_subcommand("list", "Fixture names");
  auto* fx_verify = fix->add_subcommand("verify", "Verify a fixture");
  fx_verify->add_option("NAME", fixture, "Fixture name");
  fx_verify->add_flag("--all", all, "Verify every fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Holds;
  } catch (const CLI::ParseError& e) {
    err << "pfaff: " << e.what() << "\n";
    return UsageError;
  }

  std::string command;
  auto emit = [&](const Report& r) {
    out << (json ? render_json(r) : render_text(r));
    return r.holds ? Holds : Fails;
  };
  try {
    if (*integrable) return emit(check_integrable(load(file), name));
    if (*gv_gen) return emit(gv_generate(load(file), name, field, order));
    if (*gv_ver) return emit(gv_check(load(file), name));
    if (*gv_res) return emit(gv_transform(load(file), name, expr, 0, false));
    if (*gv_sh) return emit(gv_transform(load(file), name, expr, k, true));
    if (*gv_cls) return emit(gv_classify(load(file), name));
    if (*gv_pb) return emit(gv_pullback(load(file), name, expr, degree));
    if (*tr_ver) return emit(triple_check(load(file), name));
    if (*tr_gauge) return emit(triple_move(load(file), name, expr, g_expr));
    if (*reduce) return emit(reduce_deg2(load(file), name));
    if (*cp_factor) return emit(charp_factor(load(file), name, frame));
    if (*cp_batch) return charp_batch_run(p, count, seed, poly_degree, json, out);
    if (*fx_list) {
      if (json) {
        out << Json(fixture_names()).dump(2) << "\n";
      } else {
        for (const auto& n : fixture_names()) out << n << "\n";
      }
      return Holds;
    }
    if (*fx_verify) {
      if (all == !fixture.empty()) fail(ErrorKind::Usage, "give a fixture name or --all");
      if (!all) return emit(fixture_report(fixture));
      int code = Holds;
      for (const auto& n : fixture_names())
        if (emit(fixture_report(n)) != Holds) code = Fails;
      return code;
    }
  } catch (const Error& e) {
    if (usage_kind(e.kind())) {
      err << "pfaff: " << e.what() << "\n";
      return UsageError;
    }
    std::string sub;
    for (const CLI::App* a = &app; !a->get_subcommands().empty(); a = a->get_subcommands().front())
      sub += (sub.empty() ? "" : " ") + a->get_subcommands().front()->get_name();
    return emit(error_report(sub, e));
  }
  return UsageError;
}

}  // namespace pfaff::cli
