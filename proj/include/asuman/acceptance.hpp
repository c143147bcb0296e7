#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace asuman::acceptance {

enum class Level { Quick, Standard, Full };

Level parse_level(const std::string& text);  // quick | standard | full
std::string level_name(Level level);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

// Runs every criterion; prints one PASS/FAIL line per criterion to `progress`
// as results come in (nullptr silences them).
std::vector<CriterionResult> run_all(Level level, int jobs, std::ostream* progress);

bool all_passed(const std::vector<CriterionResult>& results);
std::string summary_line(const std::vector<CriterionResult>& results);

} // namespace asuman::acceptance
