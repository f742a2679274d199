#pragma once

#include <string>

#include "udefit/types.hpp"

namespace udefit {

struct Dataset {
    std::string name;
    TimeSeries series;
    std::string provenance;
};

// Bundled reference datasets; the same tables ship as data/alcohol.csv and
// data/covid.csv for the file-ingestion path.
const Dataset& alcohol_dataset();
const Dataset& covid_dataset();

} // namespace udefit
