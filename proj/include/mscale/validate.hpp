#pragma once

#include <string>
#include <vector>

namespace mscale {

enum class CriterionStatus { Pass, Fail, Skip };

struct CriterionResult {
    int id = 0;
    std::string name;
    CriterionStatus status = CriterionStatus::Fail;
    bool optional = false;
    std::string detail;  // measured values and bounds, for the record
    double seconds = 0;
};

struct ValidateOptions {
    // Daily close file for the data-dependent criteria; empty or missing
    // file skips them.
    std::string dataPath;
    std::string dateColumn = "date";
    std::string closeColumn = "close";
    std::string dateFormat = "%Y-%m-%d";
    char delimiter = ',';
    std::vector<int> only;  // run this subset when non-empty
};

// Runs the acceptance suite in criterion order. Each result carries the
// measured numbers in `detail` so a pass/fail line is auditable.
std::vector<CriterionResult> runAcceptance(const ValidateOptions& opts = {});

// True when every non-optional criterion passed (skips count against
// optional criteria only).
bool allMandatoryPassed(const std::vector<CriterionResult>& results);

const char* criterionStatusName(CriterionStatus s);

}  // namespace mscale
