#pragma once

#include "rarenmt/corpus.hpp"

namespace rarenmt {

// `@@` marker conventions shared by the affix splitter and the BPE
// segmenter: a trailing `@@` glues a piece to the following token, a
// leading `@@` glues it to the preceding one.

inline const char* kSubwordMarker = "@@";

bool has_leading_marker(const std::string& token);
bool has_trailing_marker(const std::string& token);

// Joins marker-carrying pieces back into plain words. Throws DataError on a
// dangling marker, reporting sentence and token position.
Sentence join_subword_markers(const Sentence& sentence, std::size_t sentence_index = 0);
Corpus join_subword_markers(const Corpus& corpus);

}  // namespace rarenmt
