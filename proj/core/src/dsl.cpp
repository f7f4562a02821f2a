#include "metaforge/dsl.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace metaforge {

namespace {

using nlohmann::json;

std::string loc(std::size_t step_index, const std::string& field) {
    std::ostringstream os;
    os << "steps[" << step_index << "]";
    if (!field.empty()) os << "." << field;
    return os.str();
}

class Validator {
  public:
    explicit Validator(const json& doc) : doc_(doc) {}

    ParseResult run() {
        ParseResult out;
        DslProgram prog;

        if (!doc_.is_object()) {
            fail("$", parse_errc::malformed_document, "top-level value must be an object");
            return finish(out, prog);
        }
        if (!doc_.contains("steps") || !doc_["steps"].is_array() || doc_["steps"].empty()) {
            fail("$.steps", parse_errc::malformed_document,
                 "document requires a non-empty \"steps\" array");
            return finish(out, prog);
        }

        const json& steps = doc_["steps"];
        for (std::size_t i = 0; i < steps.size(); ++i) {
            parse_step(i, steps[i], prog);
        }

        // References may only point at steps defined earlier in the list.
        validate_references(prog);

        if (!doc_.contains("output") || !doc_["output"].is_string()) {
            fail("$.output", parse_errc::missing_output_step,
                 "document requires an \"output\" field naming a step");
        } else {
            prog.output_step = doc_["output"].get<std::string>();
            bool found = std::any_of(prog.steps.begin(), prog.steps.end(),
                                     [&](const DslStep& s) { return s.id == prog.output_step; });
            if (!found) {
                fail("$.output", parse_errc::missing_output_step,
                     "output step '" + prog.output_step + "' is not defined");
            }
        }

        return finish(out, prog);
    }

  private:
    void fail(const std::string& location, const char* code, const std::string& message) {
        issues_.push_back({location, code, message});
    }

    ParseResult finish(ParseResult& out, DslProgram& prog) {
        out.report.ok = issues_.empty();
        out.report.errors = std::move(issues_);
        if (out.report.ok) out.program = std::move(prog);
        return std::move(out);
    }

    std::optional<std::string> opt_string(const json& p, const char* key) {
        if (!p.contains(key)) return std::nullopt;
        if (!p[key].is_string()) return std::nullopt;
        return p[key].get<std::string>();
    }

    std::optional<double> require_temperature(std::size_t i, const json& p) {
        if (!p.contains("temperature")) return std::nullopt;
        if (!p["temperature"].is_number() || p["temperature"].get<double>() < 0.0) {
            fail(loc(i, "params.temperature"), parse_errc::invalid_params,
                 "temperature must be a number >= 0");
            return std::nullopt;
        }
        return p["temperature"].get<double>();
    }

    std::string require_prompt(std::size_t i, const json& p) {
        auto s = opt_string(p, "prompt");
        if (!s || s->empty()) {
            fail(loc(i, "params.prompt"), parse_errc::invalid_params,
                 "a non-empty prompt template is required");
            return {};
        }
        return *s;
    }

    std::vector<std::string> require_inputs(std::size_t i, const json& p) {
        std::vector<std::string> inputs;
        if (!p.contains("inputs") || !p["inputs"].is_array() || p["inputs"].empty()) {
            fail(loc(i, "params.inputs"), parse_errc::invalid_params,
                 "at least one input step is required");
            return inputs;
        }
        for (const auto& e : p["inputs"]) {
            if (!e.is_string()) {
                fail(loc(i, "params.inputs"), parse_errc::invalid_params,
                     "inputs must be step ids");
                return inputs;
            }
            inputs.push_back(e.get<std::string>());
        }
        return inputs;
    }

    void parse_step(std::size_t i, const json& js, DslProgram& prog) {
        if (!js.is_object() || !js.contains("id") || !js["id"].is_string() ||
            js["id"].get<std::string>().empty()) {
            fail(loc(i, "id"), parse_errc::malformed_document,
                 "every step requires a non-empty string id");
            return;
        }
        DslStep step;
        step.id = js["id"].get<std::string>();

        if (!seen_ids_.insert(step.id).second) {
            fail(loc(i, "id"), parse_errc::duplicate_step_id,
                 "step id '" + step.id + "' is defined more than once");
            return;
        }

        if (!js.contains("op") || !js["op"].is_string()) {
            fail(loc(i, "op"), parse_errc::malformed_document, "every step requires an op string");
            return;
        }
        auto op = dsl_op_from_string(js["op"].get<std::string>());
        if (!op) {
            fail(loc(i, "op"), parse_errc::unknown_op,
                 "unknown op '" + js["op"].get<std::string>() + "'");
            return;
        }
        step.op = *op;

        json params = js.value("params", json::object());
        if (!params.is_object()) {
            fail(loc(i, "params"), parse_errc::malformed_document, "params must be an object");
            return;
        }

        switch (step.op) {
            case DslOp::gen: {
                GenParams g;
                g.prompt = require_prompt(i, params);
                g.temperature = require_temperature(i, params);
                g.role = opt_string(params, "role").value_or("");
                step.params = std::move(g);
                break;
            }
            case DslOp::vote: {
                VoteParams v;
                v.inputs = require_inputs(i, params);
                step.params = std::move(v);
                break;
            }
            case DslOp::judge: {
                JudgeParams jp;
                jp.inputs = require_inputs(i, params);
                jp.prompt = opt_string(params, "prompt").value_or("");
                step.params = std::move(jp);
                break;
            }
            case DslOp::refine_loop: {
                RefineLoopParams r;
                r.input = opt_string(params, "input").value_or("");
                r.prompt = opt_string(params, "prompt").value_or("");
                if (r.input.empty() && r.prompt.empty()) {
                    fail(loc(i, "params"), parse_errc::invalid_params,
                         "REFINE_LOOP requires a prompt or an input step");
                }
                if (!params.contains("rounds") || !params["rounds"].is_number_integer()) {
                    fail(loc(i, "params.rounds"), parse_errc::invalid_params,
                         "REFINE_LOOP requires integer rounds >= 1");
                } else {
                    r.rounds = params["rounds"].get<int>();
                    if (r.rounds < 1 || r.rounds > kMaxRefineRounds) {
                        fail(loc(i, "params.rounds"), parse_errc::invalid_params,
                             "rounds must be in [1, " + std::to_string(kMaxRefineRounds) + "]");
                    }
                }
                r.revise_prompt = opt_string(params, "revise_prompt").value_or("");
                step.params = std::move(r);
                break;
            }
            case DslOp::route: {
                RouteParams rt;
                if (params.contains("experts") && params["experts"].is_array()) {
                    for (const auto& e : params["experts"]) {
                        if (e.is_string()) rt.experts.push_back(e.get<std::string>());
                    }
                }
                if (rt.experts.size() < 2) {
                    fail(loc(i, "params.experts"), parse_errc::invalid_params,
                         "ROUTE requires at least 2 experts");
                }
                rt.prompt = opt_string(params, "prompt").value_or("");
                step.params = std::move(rt);
                break;
            }
            case DslOp::fanout: {
                FanoutParams f;
                f.prompt = require_prompt(i, params);
                if (!params.contains("samples") || !params["samples"].is_number_integer()) {
                    fail(loc(i, "params.samples"), parse_errc::invalid_params,
                         "FANOUT requires integer samples >= 2");
                } else {
                    f.samples = params["samples"].get<int>();
                    if (f.samples < 2 || f.samples > kMaxFanoutSamples) {
                        fail(loc(i, "params.samples"), parse_errc::invalid_params,
                             "samples must be in [2, " + std::to_string(kMaxFanoutSamples) + "]");
                    }
                }
                f.temperature = require_temperature(i, params);
                step.params = std::move(f);
                break;
            }
        }

        prog.steps.push_back(std::move(step));
    }

    void validate_references(const DslProgram& prog) {
        std::set<std::string> all_ids;
        for (const auto& s : prog.steps) all_ids.insert(s.id);

        std::set<std::string> earlier;
        for (std::size_t i = 0; i < prog.steps.size(); ++i) {
            const DslStep& s = prog.steps[i];
            for (const std::string& ref : step_references(s)) {
                if (earlier.count(ref)) continue;
                if (ref == s.id || all_ids.count(ref)) {
                    fail(loc(i, ""), parse_errc::cycle,
                         "step '" + s.id + "' references '" + ref +
                             "', which is not an earlier step; forward or self references "
                             "form cycles");
                } else {
                    fail(loc(i, ""), parse_errc::dangling_reference,
                         "step '" + s.id + "' references undefined step '" + ref + "'");
                }
            }
            earlier.insert(s.id);
        }
    }

    const json& doc_;
    std::set<std::string> seen_ids_;
    std::vector<ParseIssue> issues_;
};

// Pull a JSON document out of model output: raw JSON, a fenced block, or the
// outermost brace span.
std::optional<json> extract_json(std::string_view text) {
    auto try_parse = [](std::string_view s) -> std::optional<json> {
        json j = json::parse(s, nullptr, false);
        if (j.is_discarded()) return std::nullopt;
        return j;
    };

    if (auto j = try_parse(text)) return j;

    auto fence = text.find("```");
    if (fence != std::string_view::npos) {
        auto body_start = text.find('\n', fence);
        auto fence_end = text.find("```", fence + 3);
        if (body_start != std::string_view::npos && fence_end != std::string_view::npos &&
            body_start < fence_end) {
            if (auto j = try_parse(text.substr(body_start + 1, fence_end - body_start - 1)))
                return j;
        }
    }

    auto first = text.find('{');
    auto last = text.rfind('}');
    if (first != std::string_view::npos && last != std::string_view::npos && first < last) {
        if (auto j = try_parse(text.substr(first, last - first + 1))) return j;
    }
    return std::nullopt;
}

}  // namespace

const char* to_string(DslOp op) {
    switch (op) {
        case DslOp::gen: return "GEN";
        case DslOp::vote: return "VOTE";
        case DslOp::judge: return "JUDGE";
        case DslOp::refine_loop: return "REFINE_LOOP";
        case DslOp::route: return "ROUTE";
        case DslOp::fanout: return "FANOUT";
    }
    return "GEN";
}

std::optional<DslOp> dsl_op_from_string(const std::string& s) {
    if (s == "GEN") return DslOp::gen;
    if (s == "VOTE") return DslOp::vote;
    if (s == "JUDGE") return DslOp::judge;
    if (s == "REFINE_LOOP") return DslOp::refine_loop;
    if (s == "ROUTE") return DslOp::route;
    if (s == "FANOUT") return DslOp::fanout;
    return std::nullopt;
}

std::string ParseReport::to_text() const {
    if (ok) return "ok";
    std::ostringstream os;
    os << "The program document is invalid:\n";
    for (const auto& e : errors) {
        os << "- [" << e.code << "] at " << e.location << ": " << e.message << "\n";
    }
    return os.str();
}

std::vector<std::string> placeholder_references(std::string_view tmpl) {
    std::vector<std::string> refs;
    std::size_t pos = 0;
    while ((pos = tmpl.find("{step:", pos)) != std::string_view::npos) {
        std::size_t end = tmpl.find('}', pos);
        if (end == std::string_view::npos) break;
        refs.emplace_back(tmpl.substr(pos + 6, end - pos - 6));
        pos = end + 1;
    }
    return refs;
}

std::vector<std::string> step_references(const DslStep& step) {
    std::vector<std::string> refs;
    auto add_prompt_refs = [&](const std::string& tmpl) {
        for (auto& r : placeholder_references(tmpl)) refs.push_back(std::move(r));
    };
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GenParams>) {
                add_prompt_refs(p.prompt);
            } else if constexpr (std::is_same_v<T, VoteParams>) {
                refs = p.inputs;
            } else if constexpr (std::is_same_v<T, JudgeParams>) {
                refs = p.inputs;
                add_prompt_refs(p.prompt);
            } else if constexpr (std::is_same_v<T, RefineLoopParams>) {
                if (!p.input.empty()) refs.push_back(p.input);
                add_prompt_refs(p.prompt);
                add_prompt_refs(p.revise_prompt);
            } else if constexpr (std::is_same_v<T, RouteParams>) {
                add_prompt_refs(p.prompt);
            } else if constexpr (std::is_same_v<T, FanoutParams>) {
                add_prompt_refs(p.prompt);
            }
        },
        step.params);
    return refs;
}

ParseResult dsl_parse(std::string_view text) {
    auto doc = extract_json(text);
    if (!doc) {
        ParseResult out;
        out.report.ok = false;
        out.report.errors.push_back({"$", parse_errc::malformed_document,
                                     "no parseable JSON document found in the response"});
        return out;
    }
    return Validator(*doc).run();
}

nlohmann::json program_to_json(const DslProgram& p) {
    json steps = json::array();
    for (const auto& s : p.steps) {
        json params = json::object();
        std::visit(
            [&](const auto& sp) {
                using T = std::decay_t<decltype(sp)>;
                if constexpr (std::is_same_v<T, GenParams>) {
                    params["prompt"] = sp.prompt;
                    if (sp.temperature) params["temperature"] = *sp.temperature;
                    if (!sp.role.empty()) params["role"] = sp.role;
                } else if constexpr (std::is_same_v<T, VoteParams>) {
                    params["inputs"] = sp.inputs;
                } else if constexpr (std::is_same_v<T, JudgeParams>) {
                    params["inputs"] = sp.inputs;
                    if (!sp.prompt.empty()) params["prompt"] = sp.prompt;
                } else if constexpr (std::is_same_v<T, RefineLoopParams>) {
                    if (!sp.input.empty()) params["input"] = sp.input;
                    if (!sp.prompt.empty()) params["prompt"] = sp.prompt;
                    params["rounds"] = sp.rounds;
                    if (!sp.revise_prompt.empty()) params["revise_prompt"] = sp.revise_prompt;
                } else if constexpr (std::is_same_v<T, RouteParams>) {
                    params["experts"] = sp.experts;
                    if (!sp.prompt.empty()) params["prompt"] = sp.prompt;
                } else if constexpr (std::is_same_v<T, FanoutParams>) {
                    params["prompt"] = sp.prompt;
                    params["samples"] = sp.samples;
                    if (sp.temperature) params["temperature"] = *sp.temperature;
                }
            },
            s.params);
        steps.push_back(json{{"id", s.id}, {"op", to_string(s.op)}, {"params", params}});
    }
    return json{{"steps", steps}, {"output", p.output_step}};
}

std::string dsl_serialize(const DslProgram& p) { return program_to_json(p).dump(2); }

std::int64_t call_budget(const DslProgram& p) {
    std::int64_t budget = 0;
    for (const auto& s : p.steps) {
        std::visit(
            [&](const auto& sp) {
                using T = std::decay_t<decltype(sp)>;
                if constexpr (std::is_same_v<T, FanoutParams>) {
                    budget += sp.samples;
                } else if constexpr (std::is_same_v<T, RefineLoopParams>) {
                    budget += sp.rounds;
                } else if constexpr (std::is_same_v<T, VoteParams>) {
                    // aggregation only
                } else {
                    budget += 1;
                }
            },
            s.params);
    }
    return budget;
}

}  // namespace metaforge
