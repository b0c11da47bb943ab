#include "nesa/vocab.hpp"

#include "nesa/errors.hpp"
#include "nesa/io.hpp"
#include "nesa/tokenizer.hpp"

#include <algorithm>
#include <set>

namespace nesa {

namespace {
constexpr const char* kSpecials[Vocabulary::kNumSpecials] = {"[PAD]", "[UNK]", "[MASK]",
                                                             "[SENTIMENT]"};
}

const char* Vocabulary::special_token(int id) {
  require(id >= 0 && id < kNumSpecials, ErrorKind::contract, "special token id out of range");
  return kSpecials[id];
}

Vocabulary::Vocabulary() {
  for (const char* s : kSpecials) push(s);
}

void Vocabulary::push(std::string token) {
  int id = static_cast<int>(tokens_.size());
  auto [it, inserted] = index_.emplace(token, id);
  require(inserted, ErrorKind::vocabulary, "duplicate vocabulary token: '" + token + "'");
  tokens_.push_back(std::move(token));
}

Vocabulary Vocabulary::build(const std::vector<Record>& records) {
  std::set<std::string> seen;
  for (const Record& rec : records) {
    for (const SurfaceToken& tok : lex(rec.sentence)) seen.insert(tok.text);
  }
  std::vector<std::string> tokens(seen.begin(), seen.end());
  return from_tokens(tokens);
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  Vocabulary v;
  std::vector<std::string> sorted = tokens;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::string& t : sorted) {
    require(!t.empty(), ErrorKind::vocabulary, "empty vocabulary token");
    if (!v.contains(t)) v.push(std::move(t));
  }
  return v;
}

int Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.find(std::string(token)) != index_.end();
}

const std::string& Vocabulary::token(int id) const {
  require(id >= 0 && id < size(), ErrorKind::vocabulary,
          "token id " + std::to_string(id) + " out of range [0, " + std::to_string(size()) + ")");
  return tokens_[static_cast<std::size_t>(id)];
}

std::string Vocabulary::to_text() const {
  std::string out;
  for (const std::string& t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::from_text(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  require(lines.size() >= kNumSpecials, ErrorKind::vocabulary,
          "vocabulary file too short for the four special tokens");
  for (int i = 0; i < kNumSpecials; ++i) {
    require(lines[static_cast<std::size_t>(i)] == kSpecials[i], ErrorKind::vocabulary,
            "vocabulary line " + std::to_string(i) + " must be " + std::string(kSpecials[i]));
  }
  Vocabulary v;
  for (std::size_t i = kNumSpecials; i < lines.size(); ++i) {
    require(!lines[i].empty(), ErrorKind::vocabulary,
            "empty vocabulary line " + std::to_string(i));
    v.push(lines[i]);
  }
  return v;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_text());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  return from_text(read_file(path));
}

std::uint64_t Vocabulary::hash() const { return fnv1a64(to_text()); }

}  // namespace nesa
