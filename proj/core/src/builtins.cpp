#include "metaforge/builtins.hpp"

#include <cassert>

#include "metaforge/errors.hpp"

namespace metaforge {

namespace {

constexpr const char* kAnswerSuffix =
    " Finish with a final line of the form ANSWER: <your answer>.";

DslProgram chain_of_thought() {
    GenParams g;
    g.prompt = std::string("Question: {question}\n"
                           "Reason through the problem step by step, then conclude.") +
               kAnswerSuffix;
    DslProgram p;
    p.steps.push_back({"cot", DslOp::gen, g});
    p.output_step = "cot";
    return p;
}

DslProgram majority_voting() {
    FanoutParams f;
    f.prompt = std::string("Question: {question}\n"
                           "Reason step by step and answer.") +
               kAnswerSuffix;
    f.samples = 5;
    f.temperature = 1.0;
    VoteParams v;
    v.inputs = {"draft"};
    DslProgram p;
    p.steps.push_back({"draft", DslOp::fanout, f});
    p.steps.push_back({"consensus", DslOp::vote, v});
    p.output_step = "consensus";
    return p;
}

DslProgram refinement_from_feedback() {
    RefineLoopParams r;
    r.prompt = std::string("Question: {question}\n"
                           "Write a first attempt at the answer.") +
               kAnswerSuffix;
    r.rounds = 3;
    r.revise_prompt = std::string("Question: {question}\n"
                                  "Your previous attempt:\n{draft}\n"
                                  "Point out any mistakes or gaps in the attempt above, then "
                                  "produce an improved answer.") +
                      kAnswerSuffix;
    DslProgram p;
    p.steps.push_back({"refine", DslOp::refine_loop, r});
    p.output_step = "refine";
    return p;
}

DslProgram llm_debate() {
    auto opening = [](const char* who) {
        GenParams g;
        g.role = who;
        g.prompt = std::string("Question: {question}\n"
                               "Argue for the answer you believe is correct.") +
                   kAnswerSuffix;
        return g;
    };
    auto rebuttal = [](const char* who, const char* opponent_step) {
        GenParams g;
        g.role = who;
        g.prompt = std::string("Question: {question}\n"
                               "Your opponent argued:\n{step:") +
                   opponent_step +
                   "}\n"
                   "Respond to their argument and state your final position." +
                   kAnswerSuffix;
        return g;
    };
    JudgeParams j;
    j.inputs = {"a2", "b2"};
    j.prompt = std::string("Question: {question}\n"
                           "Two debaters gave these closing statements:\n{candidates}\n"
                           "Decide which conclusion is better supported.") +
               kAnswerSuffix;
    DslProgram p;
    p.steps.push_back({"a1", DslOp::gen, opening("Debater A")});
    p.steps.push_back({"b1", DslOp::gen, opening("Debater B")});
    p.steps.push_back({"a2", DslOp::gen, rebuttal("Debater A", "b1")});
    p.steps.push_back({"b2", DslOp::gen, rebuttal("Debater B", "a1")});
    p.steps.push_back({"verdict", DslOp::judge, j});
    p.output_step = "verdict";
    return p;
}

DslProgram quality_diversity() {
    FanoutParams f;
    f.prompt = std::string("Question: {question}\n"
                           "Solve this using an approach other responders are unlikely to "
                           "take. Name the approach, apply it, and conclude.") +
               kAnswerSuffix;
    f.samples = 4;
    f.temperature = 1.0;
    JudgeParams j;
    j.inputs = {"ideas"};
    j.prompt = std::string("Question: {question}\n"
                           "Several independent attempts follow:\n{candidates}\n"
                           "Combine their strengths and give the single best answer.") +
               kAnswerSuffix;
    DslProgram p;
    p.steps.push_back({"ideas", DslOp::fanout, f});
    p.steps.push_back({"ensemble", DslOp::judge, j});
    p.output_step = "ensemble";
    return p;
}

DslProgram routing() {
    RouteParams r;
    r.experts = builtin_expert_roster();
    DslProgram p;
    p.steps.push_back({"route", DslOp::route, r});
    p.output_step = "route";
    return p;
}

DslProgram stepping_back() {
    GenParams principles;
    principles.prompt =
        "Question: {question}\n"
        "Do not answer yet. List the general principles, facts, or formulas "
        "relevant to this kind of question.";
    GenParams apply;
    apply.prompt = std::string("Question: {question}\n"
                               "Relevant principles:\n{step:principles}\n"
                               "Apply the principles above to answer the question.") +
                   kAnswerSuffix;
    DslProgram p;
    p.steps.push_back({"principles", DslOp::gen, principles});
    p.steps.push_back({"apply", DslOp::gen, apply});
    p.output_step = "apply";
    return p;
}

AgentRecord make_record(const char* name, DslProgram prog) {
    // Builtins must round-trip through their own serialization.
    auto parsed = dsl_parse(dsl_serialize(prog));
    if (!parsed.report.ok) {
        throw Error(Errc::bad_config,
                    std::string("builtin '") + name + "' failed validation:\n" +
                        parsed.report.to_text());
    }
    assert(*parsed.program == prog);

    AgentRecord rec;
    rec.id = name;
    rec.name = name;
    rec.program = std::move(prog);
    rec.source = AgentSource::initial_library;
    rec.iteration = 0;
    rec.design_cost = 0;
    return rec;
}

}  // namespace

const std::vector<std::string>& builtin_expert_roster() {
    static const std::vector<std::string> roster = {"math", "science", "reading", "generalist"};
    return roster;
}

std::vector<AgentRecord> builtin_library() {
    std::vector<AgentRecord> lib;
    lib.push_back(make_record("chain_of_thought", chain_of_thought()));
    lib.push_back(make_record("majority_voting", majority_voting()));
    lib.push_back(make_record("refinement_from_feedback", refinement_from_feedback()));
    lib.push_back(make_record("llm_debate", llm_debate()));
    lib.push_back(make_record("quality_diversity", quality_diversity()));
    lib.push_back(make_record("routing", routing()));
    lib.push_back(make_record("stepping_back", stepping_back()));
    return lib;
}

}  // namespace metaforge
