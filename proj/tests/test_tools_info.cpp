#include "support.hpp"

#include "mdcrow/info/literature.hpp"
#include "mdcrow/info/uniprot.hpp"
#include "mdcrow/sim/script.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace mdcrow;
using namespace mdcrow::info;

namespace {

// Wraps a client and counts what goes through it.
class CountingHttp final : public HttpClient {
public:
    explicit CountingHttp(std::shared_ptr<HttpClient> inner) : inner_(std::move(inner)) {}
    HttpResponse get(const std::string& url, const HttpHeaders& h) override {
        urls.push_back(url);
        return inner_->get(url, h);
    }
    HttpResponse post(const std::string& url, const std::string& b, const std::string& c,
                      const HttpHeaders& h) override {
        urls.push_back(url);
        return inner_->post(url, b, c, h);
    }
    std::vector<std::string> urls;

private:
    std::shared_ptr<HttpClient> inner_;
};

UniprotConfig fixture_uniprot() {
    UniprotConfig c;
    c.http = std::make_shared<RecordedHttpClient>((testing::data() / "fixtures/uniprot").string());
    return c;
}

// Independent Okapi BM25 (idf = ln((N - df + 0.5)/(df + 0.5) + 1)).
double bm25_oracle(const std::vector<std::vector<std::string>>& docs, const std::vector<std::string>& query,
                   std::size_t d, double k1 = 1.5, double b = 0.75) {
    double avg = 0;
    for (const auto& x : docs) avg += static_cast<double>(x.size());
    avg /= static_cast<double>(docs.size());
    double s = 0;
    for (const auto& term : query) {
        double df = 0;
        for (const auto& x : docs)
            if (std::find(x.begin(), x.end(), term) != x.end()) df += 1;
        const double n = static_cast<double>(docs.size());
        const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
        const double f = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), term));
        s += idf * f * (k1 + 1) / (f + k1 * (1 - b + b * static_cast<double>(docs[d].size()) / avg));
    }
    return s;
}

}  // namespace

TEST_CASE("UniProt: 1TRN metadata has active and binding sites") {
    const auto m = fetch_protein_metadata("1TRN", fixture_uniprot());
    CHECK(m.accession == "P07477");
    int active = 0, binding = 0;
    for (const auto& s : m.sites) (s.kind == Site::Kind::active ? active : binding)++;
    CHECK(active == 3);
    CHECK(binding >= 1);
    CHECK_FALSE(m.subunit_structure.empty());
    CHECK_FALSE(m.sequence.empty());
    for (char c : m.sequence) CHECK(std::string("ACDEFGHIKLMNPQRSTVWYX").find(c) != std::string::npos);

    const auto text = format_metadata(m, {"subunit", "sequence", "active", "binding"});
    CHECK(text.find("active sites") != std::string::npos);
    CHECK(text.find("binding sites") != std::string::npos);
    CHECK(text.find("subunit structure") != std::string::npos);
}

TEST_CASE("UniProt: errors and determinism") {
    const auto cfg = fixture_uniprot();
    CHECK_THROWS_AS(fetch_protein_metadata("", cfg), UsageError);
    CHECK_THROWS_AS(fetch_protein_metadata("   ", cfg), UsageError);
    CHECK_THROWS_AS(fetch_protein_metadata("Q99999", cfg), NotFoundError);
    CHECK_THROWS_AS(fetch_protein_metadata("9ZZZ", cfg), NotFoundError);
    CHECK(fetch_protein_metadata("P02751", cfg) == fetch_protein_metadata("P02751", cfg));
    CHECK(fetch_protein_metadata("1TRN", cfg) == fetch_protein_metadata("P07477", cfg));

    UniprotConfig dead;
    dead.http = std::make_shared<NoNetworkClient>();
    CHECK_THROWS_AS(fetch_protein_metadata("P07477", dead), NetworkError);
}

TEST_CASE("fixture mode never reaches the network") {
    testing::TempDir dir("guard");
    registry::FileRegistry files(dir.path());
    sim::ToyEngine engine;
    auto ctx = tools::fixture_context(files, engine, nullptr);
    auto counting = std::make_shared<CountingHttp>(ctx.uniprot.http);
    auto guard = std::make_shared<NoNetworkClient>();
    ctx.uniprot.http = counting;
    ctx.pdb.http = guard;
    auto set = tools::build_toolset(ctx);

    const std::vector<std::pair<std::string, std::string>> calls{
        {"UniProtLookup", "query=1TRN fields=all"},
        {"UniProtLookup", "query=P69905"},
        {"LiteratureSearch", "question=\"common parameters used to simulate fibronectin\""},
        {"PDBFileDownloader", "1LYZ"},
        {"PDBFileDownloader", "1TRN"}};
    for (const auto& [tool, input] : calls) {
        auto d = agent::dispatch_tool(agent::AgentAction::call("", tool, input), set);
        CHECK_MESSAGE(!d.error, tool << ": " << d.observation);
    }
    CHECK(guard->attempts() == 0);
    CHECK_FALSE(counting->urls.empty());
}

TEST_CASE("chunk tiling") {
    std::string text;
    for (int i = 0; i < 2000; ++i) text += "token" + std::to_string(i) + (i % 17 == 0 ? "\n" : " ");
    for (std::size_t size : {1ul, 7ul, 100ul, 3000ul, 100000ul}) {
        const auto chunks = chunk_text(text, size);
        std::string joined;
        for (const auto& c : chunks) {
            CHECK(c.size() <= size);
            CHECK_FALSE(c.empty());
            joined += c;
        }
        CHECK(joined == text);
    }
    CHECK(chunk_text("", 10).empty());

    const auto corpus = load_corpus(testing::data() / "corpus");
    for (const auto& doc : corpus.documents) {
        std::string joined;
        for (const auto& c : corpus.chunks)
            if (c.doc_id == doc.doc_id) joined += c.text;
        CHECK(joined == doc.text);
    }
}

TEST_CASE("BM25 agrees with an independent scorer") {
    std::vector<CorpusChunk> chunks{{"a", 0, "lysozyme is a small enzyme. lysozyme binds sugar.", ""},
                                    {"b", 0, "fibronectin simulations use the CHARMM force field at 310 K.", ""},
                                    {"c", 0, "water models: TIP3P is common. small boxes are fast.", ""},
                                    {"d", 0, "enzyme kinetics of trypsin and lysozyme compared", ""}};
    Bm25Index index(chunks);
    std::vector<std::vector<std::string>> docs;
    for (const auto& c : chunks) docs.push_back(tokenize(c.text));
    for (const std::string q : {"lysozyme enzyme", "force field", "small boxes water", "absent words"}) {
        const auto terms = tokenize(q);
        for (std::size_t d = 0; d < chunks.size(); ++d)
            CHECK(index.score(terms, d) == doctest::Approx(bm25_oracle(docs, terms, d)).epsilon(1e-12));
    }
    CHECK(index.top("absent words", 8).empty());
}

TEST_CASE("planted phrase ranks first") {
    testing::TempDir dir("corpus");
    std::string filler;
    for (int i = 0; i < 400; ++i) filler += "protein simulation analysis trajectory energy ";
    for (int d = 0; d < 4; ++d) testing::spit(dir / ("doc" + std::to_string(d) + ".txt"), filler);
    testing::spit(dir / "doc2.txt", filler + "the quasiharmonic zwitterion cascade appears here once. " + filler);
    const auto corpus = load_corpus(dir.path(), 1000);
    const Bm25Index index(corpus.chunks);
    const auto top = index.top("quasiharmonic zwitterion cascade", 8);
    REQUIRE_FALSE(top.empty());
    const auto& best = corpus.chunks[top[0]];
    CHECK(best.doc_id == "doc2");
    CHECK(best.text.find("quasiharmonic zwitterion") != std::string::npos);
}

TEST_CASE("literature search over the shipped corpus") {
    const auto corpus = load_corpus(testing::data() / "corpus");
    CHECK(corpus.warnings.empty());
    const std::string q = "What are the common parameters used to simulate fibronectin?";

    auto extractive = literature_search(q, corpus, nullptr);
    REQUIRE_FALSE(extractive.citations.empty());
    CHECK(extractive.citations[0].doc_id.find("fibronectin") != std::string::npos);

    llm::ScriptedModel model({"Simulations commonly use 2 fs steps at 300 K [fibronectin_md_parameters#0]. "
                              "Made up [ghost#4]."});
    auto a = literature_search(q, corpus, &model);
    REQUIRE(a.citations.size() == 1);
    CHECK(a.citations[0] == Citation{"fibronectin_md_parameters", 0});
    CHECK_FALSE(a.warnings.empty());
    // Citation soundness.
    for (const auto& c : a.citations) {
        bool found = false;
        for (const auto& ch : corpus.chunks) found |= ch.doc_id == c.doc_id && ch.chunk_index == c.chunk_index;
        CHECK(found);
    }
    // One model call.
    CHECK(model.requests().size() == 1);

    // No citations in the reply: the top-ranked chunk is cited.
    llm::ScriptedModel bare({"An answer without labels."});
    auto b = literature_search(q, corpus, &bare);
    REQUIRE(b.citations.size() == 1);
    CHECK(b.citations[0].doc_id == corpus.chunks[b.retrieved[0]].doc_id);

    CHECK_THROWS_AS(literature_search("", corpus, nullptr), UsageError);
}

TEST_CASE("empty corpus and unreadable documents") {
    testing::TempDir dir("empty");
    auto none = literature_search("anything", load_corpus(dir.path()), nullptr);
    CHECK(none.no_sources);
    CHECK(none.answer.find("no sources") != std::string::npos);

    testing::spit(dir / "broken.pdf", "%PDF-1.4 this is not really a pdf");
    testing::spit(dir / "good.txt", "myoglobin stores oxygen in muscle");
    const auto corpus = load_corpus(dir.path());
    CHECK(corpus.documents.size() == 1);
    REQUIRE(corpus.warnings.size() == 1);
    CHECK(corpus.warnings[0].find("broken.pdf") != std::string::npos);
    CHECK_FALSE(literature_search("myoglobin oxygen", corpus, nullptr).no_sources);
}

TEST_CASE("PDF text extraction") {
    const std::string stream = "BT /F1 12 Tf 72 712 Td (Hemoglobin is a tetramer) Tj T* [(of ) -120 (globins)] TJ ET";
    const std::string pdf = "%PDF-1.4\n1 0 obj\n<< /Length " + std::to_string(stream.size()) +
                            " >>\nstream\n" + stream + "\nendstream\nendobj\n%%EOF\n";
    const auto text = extract_pdf_text(pdf);
    CHECK(text.find("Hemoglobin is a tetramer") != std::string::npos);
    CHECK(text.find("globins") != std::string::npos);
    CHECK_THROWS_AS(extract_pdf_text("%PDF-1.4\nnothing here\n"), ParseError);

    // The shipped corpus PDF is FlateDecode-compressed.
    const auto shipped = extract_pdf_text(testing::slurp(testing::data() / "corpus/hemoglobin_md_protocols.pdf"));
    CHECK(to_lower(shipped).find("hemoglobin") != std::string::npos);
}
