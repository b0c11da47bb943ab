#include "synthetic.hpp"

#include "nesa/errors.hpp"
#include "nesa/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

// Generates the synthetic corpora used for demos and end-to-end checks.
int main(int argc, char** argv) {
  CLI::App app{"Synthetic corpus generator"};

  std::string kind = "cue";
  std::size_t count = 2000;
  std::uint64_t seed = 1;
  std::filesystem::path out = "data";
  app.add_option("--kind", kind, "cue | probe | mlm")
      ->check(CLI::IsMember({"cue", "probe", "mlm"}));
  app.add_option("--count", count, "corpus size (cue kind)");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out);
    if (kind == "cue") {
      nesa::synthetic::CueCorpusOptions options;
      options.count = count;
      options.seed = seed;
      nesa::write_records(out / "cue.jsonl", nesa::synthetic::cue_corpus(options));
      std::cout << "wrote " << (out / "cue.jsonl").string() << '\n';
    } else if (kind == "probe") {
      auto probe = nesa::synthetic::masking_probe(600, 300, seed);
      nesa::write_records(out / "probe_train.jsonl", probe.train);
      nesa::write_records(out / "probe_val.jsonl", probe.val);
      std::cout << "wrote probe_train.jsonl and probe_val.jsonl under " << out.string() << '\n';
    } else {
      auto mlm = nesa::synthetic::mlm_corpus(count, count / 4, seed);
      nesa::write_records(out / "mlm_train.jsonl", mlm.train);
      nesa::write_records(out / "mlm_eval.jsonl", mlm.eval);
      nesa::write_file_atomic(out / "lexicon.txt", mlm.lexicon_text);
      std::cout << "wrote mlm_train.jsonl, mlm_eval.jsonl, lexicon.txt under " << out.string()
                << '\n';
    }
  } catch (const nesa::Error& e) {
    std::cerr << "error[" << nesa::to_string(e.kind()) << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
