// Command-line surface: tokenizer/baseline training, single-text scoring,
// explanations, corpus analysis reports, and backend comparison.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "absa/classify.hpp"
#include "absa/config.hpp"
#include "absa/corpus.hpp"
#include "absa/eval.hpp"
#include "absa/explain.hpp"
#include "absa/pipeline.hpp"
#include "absa/report.hpp"
#include "absa/scorer_client.hpp"
#include "absa/textprep.hpp"
#include "absa/tokenize.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace absa;

namespace {

/// Deletes tracked output files unless commit() ran: failed commands leave
/// no partial outputs behind.
class OutputGuard {
public:
    ~OutputGuard() {
        if (committed_) return;
        for (const fs::path& p : created_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    void track(const fs::path& p) { created_.push_back(p); }
    void commit() { committed_ = true; }

private:
    std::vector<fs::path> created_;
    bool committed_ = false;
};

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

/// Training text: one document per line for .txt, otherwise review texts
/// from a corpus file.
std::vector<std::string> corpus_texts(const fs::path& path) {
    if (path.extension() == ".txt") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
        std::vector<std::string> texts;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) texts.push_back(line);
        }
        return texts;
    }
    Dataset dataset = load_corpus(path);
    std::vector<std::string> texts;
    for (const Review& r : dataset.reviews()) texts.push_back(r.raw_text);
    return texts;
}

Sentiment parse_target(const std::string& target, const ScorerBackend& backend,
                       const std::string& text) {
    if (target == "auto") return score(backend, text).argmax();
    auto parsed = parse_sentiment(target);
    if (!parsed)
        throw std::runtime_error("--target must be negative, neutral, positive, or auto");
    return *parsed;
}

std::unique_ptr<ScorerBackend> make_backend(const std::string& name, const EngineConfig& cfg,
                                            std::shared_ptr<const SubwordVocab> vocab) {
    if (name == "nb") {
        if (cfg.nb_model.empty())
            throw std::runtime_error("classify.nb_model is required for the nb backend");
        return std::make_unique<NBBackend>(load_nb_model(cfg.nb_model), std::move(vocab));
    }
    if (name == "linear") {
        if (cfg.linear_model.empty())
            throw std::runtime_error("classify.linear_model is required for the linear backend");
        return std::make_unique<LinearBackend>(load_linear_model(cfg.linear_model),
                                               std::move(vocab));
    }
    if (name == "external") return std::make_unique<ExternalScorer>(parse_adapter(cfg));
    throw std::runtime_error("unknown backend \"" + name + "\" (expected nb, linear, external)");
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(s);
    while (std::getline(stream, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aspect-based sentiment analysis for banking reviews"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed_override;
    app.add_option("--config", config_path, "engine config file");
    app.add_option("--set", sets, "config override, section.key=value");
    app.add_option("--seed", seed_override, "override pipeline.seed");

    auto engine_config = [&]() {
        std::vector<std::string> overrides = sets;
        if (seed_override) overrides.push_back("pipeline.seed=" + std::to_string(*seed_override));
        std::optional<fs::path> file;
        if (!config_path.empty()) file = fs::path(config_path);
        return make_engine_config(file, overrides);
    };

    // train-tokenizer
    auto* tt = app.add_subcommand("train-tokenizer", "learn a subword vocabulary");
    tt->fallthrough();
    std::string tt_corpus, tt_out;
    int tt_vocab_size = 8000;
    double tt_coverage = 0.9995;
    tt->add_option("corpus", tt_corpus, "training corpus (.jsonl/.csv/.txt)")->required();
    tt->add_option("--vocab-size", tt_vocab_size, "total vocabulary size");
    tt->add_option("--coverage", tt_coverage, "character coverage in (0, 1]");
    tt->add_option("--out", tt_out, "vocabulary file to write")->required();

    // train-baseline
    auto* tb = app.add_subcommand("train-baseline", "train the nb or linear backend");
    tb->fallthrough();
    std::string tb_corpus, tb_kind, tb_vocab, tb_out;
    double tb_alpha = 1.0, tb_lr = 0.1, tb_l2 = 1e-4;
    int tb_epochs = 20, tb_batch = 16;
    tb->add_option("corpus", tb_corpus, "labeled training corpus")->required();
    tb->add_option("--kind", tb_kind, "nb or linear")->required();
    tb->add_option("--vocab", tb_vocab, "vocabulary file (defaults to tokenize.vocab)");
    tb->add_option("--out", tb_out, "model file to write")->required();
    tb->add_option("--alpha", tb_alpha, "nb smoothing");
    tb->add_option("--lr", tb_lr, "linear learning rate");
    tb->add_option("--epochs", tb_epochs, "linear training epochs");
    tb->add_option("--l2", tb_l2, "linear l2 penalty");
    tb->add_option("--batch", tb_batch, "linear minibatch size");

    // score
    auto* sc = app.add_subcommand("score", "score text or a corpus, JSON per review");
    sc->fallthrough();
    std::string sc_text, sc_corpus, sc_out;
    auto* sc_text_opt = sc->add_option("--text", sc_text, "single text to score");
    sc->add_option("corpus", sc_corpus, "corpus file to score");
    sc->add_option("--out", sc_out, "write JSON lines here instead of stdout");

    // explain
    auto* ex = app.add_subcommand("explain", "token attributions for one text");
    ex->fallthrough();
    std::string ex_text, ex_method, ex_target = "auto", ex_out;
    ex->add_option("--text", ex_text, "text to explain")->required();
    ex->add_option("--method", ex_method, "lime, shap-exact, or shap-kernel")->required();
    ex->add_option("--target", ex_target, "negative, neutral, positive, or auto");
    ex->add_option("--out", ex_out, "directory for explanation.json + explanation.html");

    // analyze
    auto* an = app.add_subcommand("analyze", "full corpus report (JSON + HTML)");
    an->fallthrough();
    std::string an_corpus, an_out;
    an->add_option("corpus", an_corpus, "corpus file to analyze")->required();
    an->add_option("--out", an_out, "output directory")->required();

    // eval
    auto* ev = app.add_subcommand("eval", "compare backends on a labeled corpus");
    ev->fallthrough();
    std::string ev_corpus, ev_backends, ev_lexicon = "both", ev_out;
    ev->add_option("corpus", ev_corpus, "labeled test corpus")->required();
    ev->add_option("--backends", ev_backends, "comma-separated: nb,linear,external");
    ev->add_option("--lexicon", ev_lexicon, "on, off, or both");
    ev->add_option("--out", ev_out, "write the comparison as JSON here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tt) {
            std::vector<std::string> texts = corpus_texts(tt_corpus);
            SubwordVocab vocab = train_subword(texts, tt_vocab_size, tt_coverage);
            OutputGuard guard;
            guard.track(tt_out);
            save_vocab(vocab, tt_out);
            guard.commit();
            std::cout << "wrote " << tt_out << " (" << vocab.pieces().size() << " pieces)\n";
            return 0;
        }

        if (*tb) {
            if (tb_kind != "nb" && tb_kind != "linear")
                throw std::runtime_error("--kind must be nb or linear");
            fs::path vocab_path = tb_vocab;
            EngineConfig cfg = engine_config();
            if (vocab_path.empty()) vocab_path = cfg.vocab_path;
            if (vocab_path.empty())
                throw std::runtime_error("no vocabulary: pass --vocab or set tokenize.vocab");
            SubwordVocab vocab = load_vocab(vocab_path);
            Dataset train = load_corpus(tb_corpus);
            OutputGuard guard;
            guard.track(tb_out);
            if (tb_kind == "nb") {
                save_nb_model(train_nb(train, vocab, tb_alpha), tb_out);
            } else {
                LinearTrainInfo info;
                LinearModel model = train_linear(train, vocab, tb_lr, tb_epochs, tb_l2, cfg.seed,
                                                 tb_batch, &info);
                save_linear_model(model, tb_out);
                if (!info.epoch_loss.empty())
                    std::cout << "final epoch loss " << info.epoch_loss.back() << "\n";
            }
            guard.commit();
            std::cout << "wrote " << tb_out << "\n";
            return 0;
        }

        if (*sc) {
            const bool has_text = sc_text_opt->count() > 0;
            if (has_text == !sc_corpus.empty())
                throw std::runtime_error("pass exactly one of --text or a corpus file");
            try {
                Engine engine = build_engine(engine_config());
                std::string lines;
                if (has_text) {
                    lines = review_to_json(analyze_text(engine, sc_text)).dump() + "\n";
                } else {
                    Dataset ds = load_corpus(sc_corpus);
                    CorpusAnalysis analysis = analyze_corpus(engine, ds);
                    for (const auto& ra : analysis.reviews)
                        lines += review_to_json(ra).dump() + "\n";
                }
                if (sc_out.empty()) {
                    std::cout << lines;
                } else {
                    OutputGuard guard;
                    guard.track(sc_out);
                    write_file(sc_out, lines);
                    guard.commit();
                }
                return 0;
            } catch (const std::exception& e) {
                ordered_json err;
                err["error"] = e.what();
                std::cout << err.dump() << "\n";
                std::cerr << "absa score: " << e.what() << "\n";
                return 1;
            }
        }

        if (*ex) {
            Engine engine = build_engine(engine_config());
            const EngineConfig& cfg = engine.config;
            std::string normalized = normalize(ex_text).text;
            TokenizedText tokenized = encode(*engine.vocab, normalized);
            if (tokenized.tokens.empty())
                throw std::runtime_error("cannot explain text with no tokens");
            Sentiment target = parse_target(ex_target, *engine.backend, ex_text);
            const int m = static_cast<int>(tokenized.tokens.size());

            ordered_json ej;
            if (ex_method == "lime") {
                LimeOptions opt;
                opt.n_samples = std::max(cfg.lime_samples, m + 2);
                opt.seed = cfg.seed;
                opt.kernel_width = cfg.sigma;
                opt.top_k = cfg.top_k;
                opt.ridge_lambda = cfg.ridge_lambda;
                opt.workers = cfg.workers;
                LimeExplanation lime =
                    lime_explain(*engine.backend, *engine.vocab, ex_text, target, opt);
                ej = lime_to_json(lime, normalized, tokenized.tokens);
            } else if (ex_method == "shap-exact") {
                ShapExplanation shap = shap_exact(*engine.backend, *engine.vocab, ex_text, target,
                                                  cfg.max_exact_tokens, cfg.workers);
                ej = shap_to_json(shap, normalized, tokenized.tokens);
            } else if (ex_method == "shap-kernel") {
                ShapKernelOptions opt;
                opt.n_samples = std::max(cfg.shap_samples, 2 * m);
                opt.seed = cfg.seed;
                opt.workers = cfg.workers;
                ShapExplanation shap =
                    shap_kernel(*engine.backend, *engine.vocab, ex_text, target, opt);
                ej = shap_to_json(shap, normalized, tokenized.tokens);
            } else {
                throw std::runtime_error("--method must be lime, shap-exact, or shap-kernel");
            }

            if (ex_out.empty()) {
                std::cout << ej.dump(2) << "\n";
            } else {
                OutputGuard guard;
                fs::path dir(ex_out);
                guard.track(dir / "explanation.json");
                guard.track(dir / "explanation.html");
                write_file(dir / "explanation.json", ej.dump(2) + "\n");
                write_file(dir / "explanation.html", render_explanation_html(ej));
                guard.commit();
                std::cout << "wrote " << (dir / "explanation.json").string() << " and .html\n";
            }
            return 0;
        }

        if (*an) {
            Engine engine = build_engine(engine_config());
            Dataset ds;
            try {
                ds = load_corpus(an_corpus);
            } catch (const std::exception& e) {
                throw std::runtime_error(std::string("load corpus: ") + e.what());
            }
            if (ds.empty()) throw std::runtime_error("empty corpus: " + an_corpus);
            CorpusAnalysis analysis;
            try {
                analysis = analyze_corpus(engine, ds);
            } catch (const std::exception& e) {
                throw std::runtime_error(std::string("pipeline: ") + e.what());
            }
            ordered_json report;
            try {
                report = build_report(engine, analysis);
                validate_report(report);
            } catch (const std::exception& e) {
                throw std::runtime_error(std::string("report: ") + e.what());
            }
            OutputGuard guard;
            fs::path dir(an_out);
            guard.track(dir / "report.json");
            guard.track(dir / "report.html");
            write_file(dir / "report.json", report.dump(2) + "\n");
            write_file(dir / "report.html", render_report_html(report));
            guard.commit();
            std::cout << "wrote " << (dir / "report.json").string() << " and .html\n";
            return 0;
        }

        if (*ev) {
            EngineConfig cfg = engine_config();
            if (ev_lexicon != "on" && ev_lexicon != "off" && ev_lexicon != "both")
                throw std::runtime_error("--lexicon must be on, off, or both");
            Dataset test = load_corpus(ev_corpus);
            auto vocab = std::make_shared<const SubwordVocab>(load_vocab(cfg.vocab_path));

            Lexicon lexicon;
            if (ev_lexicon != "off") {
                if (cfg.lexicon_paths.empty())
                    throw std::runtime_error("lexicon requested but lexicon.paths is empty");
                lexicon = load_lexicons(cfg.lexicon_paths);
            }
            std::vector<bool> lexicon_settings;
            if (ev_lexicon == "both")
                lexicon_settings = {false, true};
            else
                lexicon_settings = {ev_lexicon == "on"};

            std::vector<std::string> names =
                ev_backends.empty() ? std::vector<std::string>{cfg.backend}
                                    : split_csv(ev_backends);
            if (names.empty()) throw std::runtime_error("--backends lists no backends");

            struct Planned {
                std::string name;
                bool lexicon = false;
                std::optional<std::size_t> spec;
                std::string error;
            };
            std::vector<std::unique_ptr<ScorerBackend>> owners;
            std::vector<BackendSpec> specs;
            std::vector<Planned> plan;
            for (const std::string& name : names) {
                std::unique_ptr<ScorerBackend> owner;
                std::string error;
                try {
                    owner = make_backend(name, cfg, vocab);
                } catch (const std::exception& e) {
                    error = e.what();
                }
                for (bool use_lex : lexicon_settings) {
                    Planned p;
                    p.name = owner ? owner->name() : name;
                    p.lexicon = use_lex;
                    if (owner)
                        p.spec = specs.size();
                    else
                        p.error = error;
                    if (owner) specs.push_back(BackendSpec{owner.get(), use_lex});
                    plan.push_back(std::move(p));
                }
                if (owner) owners.push_back(std::move(owner));
            }

            std::vector<ComparisonRow> rows = compare_backends(specs, test, lexicon, cfg.beta);
            std::vector<ComparisonRow> final_rows;
            for (const Planned& p : plan) {
                if (p.spec) {
                    final_rows.push_back(rows[*p.spec]);
                } else {
                    ComparisonRow row;
                    row.backend = p.name;
                    row.lexicon = p.lexicon;
                    row.error = p.error;
                    final_rows.push_back(std::move(row));
                }
            }

            std::cout << comparison_to_text(final_rows);
            if (!ev_out.empty()) {
                OutputGuard guard;
                guard.track(ev_out);
                write_file(ev_out, comparison_to_json(final_rows) + "\n");
                guard.commit();
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "absa " << app.get_subcommands().front()->get_name() << ": " << e.what()
                  << "\n";
        return 1;
    }
    return 0;
}
