#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "ctxassoc/corpus.hpp"
#include "ctxassoc/rng.hpp"

namespace testutil {

// unique scratch directory removed on destruction
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ctxassoc_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// sentence with trivial flat parse: every token attached to token 0
inline ctxassoc::Sentence flat_sentence(std::initializer_list<std::pair<const char*, const char*>> tokens,
                                        const char* label = "dep") {
  ctxassoc::Sentence s;
  for (const auto& [word, pos] : tokens) s.tokens.push_back(ctxassoc::Token{word, pos});
  s.root = 0;
  for (int t = 1; t < static_cast<int>(s.tokens.size()); ++t)
    s.edges.push_back(ctxassoc::DependencyEdge{0, t, label});
  return s;
}

// random dependency tree over n tokens, rooted at 0
inline ctxassoc::Sentence random_tree_sentence(int n, ctxassoc::Rng& rng,
                                               const std::vector<std::string>& labels) {
  ctxassoc::Sentence s;
  for (int t = 0; t < n; ++t) s.tokens.push_back(ctxassoc::Token{"w" + std::to_string(t), "NN"});
  s.root = 0;
  for (int t = 1; t < n; ++t) {
    const int parent = static_cast<int>(rng.below(static_cast<std::uint64_t>(t)));
    s.edges.push_back(ctxassoc::DependencyEdge{
        parent, t, labels[rng.below(static_cast<std::uint64_t>(labels.size()))]});
  }
  return s;
}

} // namespace testutil
