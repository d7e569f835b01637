#include "support.hpp"

#include "mdcrow/registry/checkpoint.hpp"
#include "mdcrow/service/session.hpp"

#include <doctest.h>

#include <set>
#include <thread>

using namespace mdcrow;
using namespace mdcrow::registry;
namespace fs = std::filesystem;

namespace {

agent::AgentTrace two_tool_trace() {
    agent::AgentTrace t;
    t.user_input = "download and simulate 1LYZ";
    t.steps.push_back({1, agent::AgentAction::call("a", "PDBFileDownloader", "1LYZ"), "ok", 0.5, false});
    t.steps.push_back({2, agent::AgentAction::call("b", "SetUpandRunFunction", "structure=str_0001"), "ok", 0.5, false});
    t.steps.push_back({3, agent::AgentAction::final("c", "done"), "", 0.5, false});
    t.outcome = agent::Outcome::final_answer;
    t.final_text = "done";
    return t;
}

struct RegistryFixture {
    testing::TempDir dir{"reg"};
    fs::path work = dir / "work";
    fs::path root = dir / "ckpt";
    FileRegistry files{work};
    FakeClock clock;
    SeededIdSource ids{42};

    FileEntry add(const std::string& name, const std::string& body, FileKind kind, const std::string& desc) {
        testing::spit(work / name, body);
        return files.register_file(work / name, desc, kind);
    }
};

// Sorted names of every regular file under dir, relative to it.
std::set<std::string> tree(const fs::path& dir) {
    std::set<std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out.insert(fs::relative(e.path(), dir).generic_string());
    return out;
}

}  // namespace

TEST_CASE_FIXTURE(RegistryFixture, "register_file") {
    testing::spit(work / "a.pdb", "ATOM\n");
    auto e1 = files.register_file(work / "a.pdb", "first", FileKind::structure);
    auto e2 = files.register_file(work / "a.pdb", "again", FileKind::structure);
    CHECK(e1.file_id != e2.file_id);
    CHECK(e1.file_id == "str_0001");
    CHECK(e2.file_id == "str_0002");

    auto t = add("t.trj", "x", FileKind::trajectory, "a trajectory");
    CHECK(t.file_id == "trj_0003");
    CHECK(files.get("trj_0003").description == "a trajectory");

    CHECK_THROWS_AS(files.register_file(work / "nope.pdb", "x", FileKind::structure), PersistenceError);
    CHECK(files.size() == 3);

    add("fig.ppm", "P6", FileKind::figure, "RMSD plot of trj_0003 (backbone)");
    CHECK(files.describe_all().find("RMSD plot of trj_0003 (backbone)") != std::string::npos);

    std::vector<std::string> order;
    for (const auto& e : files.entries()) order.push_back(e.file_id);
    CHECK(order == std::vector<std::string>{"str_0001", "str_0002", "trj_0003", "fig_0004"});

    CHECK_THROWS_WITH_AS(files.get("trj_9999"), doctest::Contains("str_0001"), NotFoundError);
}

TEST_CASE_FIXTURE(RegistryFixture, "id prefixes per kind") {
    const std::vector<std::pair<FileKind, std::string>> kinds{
        {FileKind::structure, "str_"}, {FileKind::trajectory, "trj_"}, {FileKind::state_log, "log_"},
        {FileKind::figure, "fig_"},    {FileKind::script, "scr_"},     {FileKind::other, "oth_"}};
    int n = 0;
    for (const auto& [k, prefix] : kinds) {
        auto e = add("f" + std::to_string(n++), "x", k, "d");
        CHECK(e.file_id.rfind(prefix, 0) == 0);
        CHECK(parse_kind(to_string(k)) == k);
    }
}

TEST_CASE_FIXTURE(RegistryFixture, "save: folder holds exactly the payloads, manifest and trace") {
    add("a.pdb", "A", FileKind::structure, "structure");
    add("b.trj", "B", FileKind::trajectory, "trajectory");
    add("c.csv", "C", FileKind::state_log, "log");
    RunCheckpoint cp;
    cp.files = files.entries();
    cp.trace = two_tool_trace();
    cp.summary = {"SUMMARY", true};
    const auto id = save_checkpoint(cp, root, ids, clock);
    CHECK(valid_run_id(id));
    CHECK(id.size() == 16);
    CHECK(tree(root / id) == std::set<std::string>{"manifest", "trace", "files/str_0001__a.pdb",
                                                   "files/trj_0002__b.trj", "files/log_0003__c.csv"});
    CHECK(testing::slurp(root / id / "files/trj_0002__b.trj") == "B");
    CHECK(testing::slurp(root / id / "manifest").find("mdcrow.checkpoint/1") != std::string::npos);

    // A second run gets its own id.
    const auto id2 = save_checkpoint(cp, root, ids, clock);
    CHECK(id2 != id);
    CHECK(list_checkpoints(root).size() == 2);
}

TEST_CASE_FIXTURE(RegistryFixture, "save then load round-trips") {
    add("a.pdb", "A", FileKind::structure, "structure");
    add("b.trj", "B", FileKind::trajectory, "trajectory");
    RunCheckpoint cp;
    cp.files = files.entries();
    cp.trace = two_tool_trace();
    cp.summary = {"SUMMARY of the run", true};
    const auto id = save_checkpoint(cp, root, ids, clock);

    const auto manifest_before = testing::slurp(root / id / "manifest");
    auto ctx = load_checkpoint(root, id, dir / "resume_work");
    CHECK(ctx.checkpoint.summary == cp.summary);
    CHECK(ctx.checkpoint.trace == cp.trace);
    CHECK(ctx.missing.empty());
    REQUIRE(ctx.checkpoint.files.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(ctx.checkpoint.files[i].file_id == cp.files[i].file_id);
        CHECK(ctx.checkpoint.files[i].description == cp.files[i].description);
        CHECK(ctx.checkpoint.files[i].kind == cp.files[i].kind);
        CHECK(ctx.checkpoint.files[i].created_at_step == cp.files[i].created_at_step);
        CHECK(fs::exists(ctx.registry.resolve(cp.files[i].file_id)));
    }
    // Manifest text round-trips too.
    CHECK(manifest_text(parse_manifest(manifest_before)) == manifest_before);
    // Loading never mutates the checkpoint.
    CHECK(testing::slurp(root / id / "manifest") == manifest_before);
    // New registrations continue after the adopted ids.
    testing::spit(dir / "resume_work" / "n.ppm", "P6");
    CHECK(ctx.registry.register_file(dir / "resume_work" / "n.ppm", "new", FileKind::figure).file_id == "fig_0003");
}

TEST_CASE_FIXTURE(RegistryFixture, "deleted payload flags only that entry") {
    add("a.pdb", "A", FileKind::structure, "structure");
    add("b.trj", "B", FileKind::trajectory, "trajectory");
    add("c.csv", "C", FileKind::state_log, "log");
    RunCheckpoint cp;
    cp.files = files.entries();
    cp.trace = two_tool_trace();
    const auto id = save_checkpoint(cp, root, ids, clock);
    fs::remove(root / id / "files/trj_0002__b.trj");

    auto ctx = load_checkpoint(root, id, dir / "w2");
    CHECK(ctx.missing == std::vector<std::string>{"trj_0002"});
    CHECK_FALSE(ctx.registry.get("str_0001").missing);
    CHECK(ctx.registry.get("trj_0002").missing);
    CHECK_FALSE(ctx.registry.get("log_0003").missing);
    CHECK_THROWS_AS(ctx.registry.resolve("trj_0002"), NotFoundError);
    CHECK(fs::exists(ctx.registry.resolve("log_0003")));
}

TEST_CASE_FIXTURE(RegistryFixture, "load errors") {
    CHECK_THROWS_AS(load_checkpoint(root, "AAAAAAAAAAAAAAAA", dir / "w"), NotFoundError);
    RunCheckpoint cp;
    cp.trace = two_tool_trace();
    const auto id = save_checkpoint(cp, root, ids, clock);
    testing::spit(root / id / "manifest", "{ not a manifest");
    CHECK_THROWS_AS(load_checkpoint(root, id, dir / "w"), IntegrityError);
    CHECK_THROWS_AS(parse_manifest(R"({"schema": "other/9"})"), IntegrityError);

    testing::spit(dir / "plainfile", "x");
    CHECK_THROWS_AS(save_checkpoint(cp, dir / "plainfile", ids, clock), PersistenceError);
}

TEST_CASE("run ids") {
    CHECK(valid_run_id("Ab3_-xYz09AbCdEf"));
    CHECK_FALSE(valid_run_id(""));
    CHECK_FALSE(valid_run_id("../etc"));
    CHECK_FALSE(valid_run_id("Ab3_-xYz09AbCd/f"));
    SeededIdSource a(1), b(1);
    CHECK(a.next_run_id() == b.next_run_id());
    RandomIdSource r;
    std::set<std::string> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(r.next_run_id());
    CHECK(seen.size() == 1000);
    for (const auto& s : seen) CHECK(valid_run_id(s));
}

TEST_CASE_FIXTURE(RegistryFixture, "concurrent saves never share a folder") {
    std::vector<std::string> out(8);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            FakeClock c;
            SeededIdSource s(static_cast<std::uint64_t>(100 + t));
            testing::spit(work / ("p" + std::to_string(t)), std::string(1000, static_cast<char>('a' + t)));
            RunCheckpoint cp;
            cp.files.push_back({"oth_0001", (work / ("p" + std::to_string(t))).string(), "payload", 1,
                                FileKind::other, false});
            cp.trace = two_tool_trace();
            cp.summary = {"run " + std::to_string(t), false};
            out[static_cast<size_t>(t)] = save_checkpoint(cp, root, s, c);
        });
    }
    for (auto& th : threads) th.join();
    CHECK(std::set<std::string>(out.begin(), out.end()).size() == 8);
    for (int t = 0; t < 8; ++t) {
        const auto& id = out[static_cast<size_t>(t)];
        auto ctx = load_checkpoint(root, id, dir / ("w" + std::to_string(t)));
        CHECK(ctx.checkpoint.summary.text == "run " + std::to_string(t));
        CHECK(testing::slurp(ctx.registry.resolve("oth_0001")) == std::string(1000, static_cast<char>('a' + t)));
    }
}

TEST_CASE("summarize_run") {
    const auto trace = two_tool_trace();
    const std::vector<FileEntry> files{{"str_0001", "/x/a.pdb", "1LYZ", 1, FileKind::structure, false},
                                       {"trj_0002", "/x/b.trj", "run", 2, FileKind::trajectory, false}};
    llm::ScriptedModel ok({"SUMMARY"});
    auto s = summarize_run(trace, files, &ok);
    CHECK(s.text == "SUMMARY");
    CHECK(s.from_llm);
    // One call over the fixed template.
    REQUIRE(ok.requests().size() == 1);
    CHECK(ok.requests()[0].back().content.find("download and simulate 1LYZ") != std::string::npos);

    llm::ScriptedModel down({});
    auto d = summarize_run(trace, files, &down);
    CHECK_FALSE(d.from_llm);
    CHECK(d.text.find("str_0001") != std::string::npos);
    CHECK(d.text.find("trj_0002") != std::string::npos);
    CHECK(d.text.find("PDBFileDownloader") != std::string::npos);
    CHECK(d.text.find("SetUpandRunFunction") != std::string::npos);

    std::string longtext;
    for (int i = 0; i < 800; ++i) longtext += "word ";
    llm::ScriptedModel chatty({longtext});
    CHECK(split_ws(summarize_run(trace, files, &chatty).text).size() == kSummaryWordLimit);
}

TEST_CASE("resumed run references the prior trajectory") {
    testing::TempDir dir("resume");
    FakeClock clock;
    SeededIdSource ids(9);
    service::RunEnvironment env;
    env.checkpoint_root = dir / "ckpt";
    env.work_root = dir / "work";
    env.clock = &clock;
    env.ids = &ids;

    llm::ScriptedModel phase1(llm::load_script((testing::data() / "mock/resume_phase1.json").string()));
    env.model = &phase1;
    auto r1 = service::run_session({"Simulate 1VII for 200 steps.", std::nullopt}, env);
    REQUIRE(r1.trace.outcome == agent::Outcome::final_answer);
    const auto parent_manifest = testing::slurp(env.checkpoint_root / r1.run_id / "manifest");

    llm::ScriptedModel phase2(llm::load_script((testing::data() / "mock/resume_phase2.json").string()));
    env.model = &phase2;
    registry::RunSummary prior_seen;
    service::SessionHooks hooks;
    hooks.on_resume = [&](const registry::RunSummary& s) { prior_seen = s; };
    auto r2 = service::run_session({"Plot the RMSD of the earlier run.", r1.run_id}, env, hooks);
    CHECK(r2.trace.outcome == agent::Outcome::final_answer);
    CHECK(r2.parent_run == r1.run_id);
    CHECK(prior_seen.text == r1.summary.text);
    REQUIRE(r2.trace.steps.size() >= 1);
    CHECK_FALSE(r2.trace.steps[0].error);
    CHECK(r2.trace.steps[0].observation.find("trj_0002") != std::string::npos);
    bool has_figure = false;
    for (const auto& f : r2.files) has_figure |= f.kind == FileKind::figure;
    CHECK(has_figure);
    // The parent checkpoint is untouched; the child records the lineage.
    CHECK(testing::slurp(env.checkpoint_root / r1.run_id / "manifest") == parent_manifest);
    CHECK(load_checkpoint(env.checkpoint_root, r2.run_id, dir / "w").checkpoint.parent_run == r1.run_id);
}
