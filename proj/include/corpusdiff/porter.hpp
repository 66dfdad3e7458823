#pragma once

#include <string>

namespace corpusdiff {

// Porter stemming algorithm, matching the reference implementation
// distributed by its author (including its documented departures:
// bli->ble, logi->log, and words of length <= 2 left unstemmed).
// Input is expected to be a lowercase ASCII token; tokens containing
// characters outside [a-z] are returned unchanged.
std::string porter_stem(const std::string& word);

}  // namespace corpusdiff
