#include "rarenmt/subword.hpp"

#include "rarenmt/error.hpp"

namespace rarenmt {

bool has_leading_marker(const std::string& token) {
  return token.size() > 2 && token[0] == '@' && token[1] == '@';
}

bool has_trailing_marker(const std::string& token) {
  return token.size() > 2 && token[token.size() - 1] == '@' && token[token.size() - 2] == '@';
}

Sentence join_subword_markers(const Sentence& sentence, std::size_t sentence_index) {
  Sentence out;
  std::string open;  // piece that must be continued by the next token
  bool has_open = false;
  auto dangling = [&](std::size_t token_index) {
    throw DataError("dangling subword marker at sentence " + std::to_string(sentence_index + 1) +
                    ", token " + std::to_string(token_index + 1));
  };

  for (std::size_t t = 0; t < sentence.size(); ++t) {
    const std::string& token = sentence[t];
    bool lead = has_leading_marker(token);
    bool trail = has_trailing_marker(token);
    std::string core = token;
    if (lead) core.erase(0, 2);
    if (trail) core.erase(core.size() - 2);
    if (core.empty() || core == "@@") dangling(t);  // bare marker tokens

    std::string word;
    if (has_open) {
      word = open + core;  // forced join from the piece before us
    } else if (lead) {
      if (out.empty()) dangling(t);
      word = out.back() + core;
      out.pop_back();
    } else {
      word = core;
    }

    if (trail) {
      open = std::move(word);
      has_open = true;
    } else {
      out.push_back(std::move(word));
      has_open = false;
    }
  }
  if (has_open) dangling(sentence.size() - 1);
  return out;
}

Corpus join_subword_markers(const Corpus& corpus) {
  Corpus out;
  out.side = corpus.side;
  out.sentences.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    out.sentences.push_back(join_subword_markers(corpus.sentences[i], i));
  return out;
}

}  // namespace rarenmt
