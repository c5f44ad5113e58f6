#pragma once

#include <string>
#include <vector>

#include "topiclandscape/corpus.hpp"
#include "topiclandscape/emotion.hpp"

namespace tl_test {

using namespace topiclandscape;

inline Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

/// Speech whose sentences are given as whitespace-separated token strings.
inline Speech make_speech(std::string id, Date date, const std::vector<std::string>& sentences,
                          SpeakerRole role = SpeakerRole::member) {
  Speech sp;
  sp.id = std::move(id);
  sp.date = date;
  sp.speaker_id = "mp1";
  sp.speaker_role = role;
  sp.language_tag = "fi";
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    Sentence s;
    s.speech_id = sp.id;
    s.index = i;
    s.text = sentences[i];
    sp.sentences.push_back(std::move(s));
  }
  return sp;
}

inline Speech make_speech(std::string id, std::size_t n_sentences,
                          SpeakerRole role = SpeakerRole::member) {
  std::vector<std::string> s(n_sentences, "Some words here.");
  return make_speech(std::move(id), ymd(2010, 1, 1), s, role);
}

}  // namespace tl_test
