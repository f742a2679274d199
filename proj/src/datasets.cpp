#include "udefit/datasets.hpp"

namespace udefit {

const Dataset& alcohol_dataset() {
    static const Dataset ds{
        "alcohol",
        TimeSeries(
            TimeGrid({0, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.7,
                      0.75, 1,    1.5, 2,    3,   3.5, 4,   4.5, 5,   6,
                      7,    8,    9,   10,   11,  12,  13,  14,  15,  16}),
            {0,  30, 39, 46, 52, 60, 68, 70, 72, 74, 75, 80, 80, 77, 68,
             58, 51, 50, 45, 38, 32, 25, 18, 15, 12, 10, 7,  7,  7,  6}),
        "blood alcohol concentration (mg/100ml), 30 readings over 16 hours after intake",
    };
    return ds;
}

const Dataset& covid_dataset() {
    static const Dataset ds{
        "covid",
        TimeSeries(
            TimeGrid({1,  2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12, 13, 14, 15, 16, 17, 18,
                      19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31, 32, 33, 34, 35}),
            {63851, 66492, 68500, 70548, 72436, 74185, 74576, 75465, 76288,
             76936, 77150, 77658, 78064, 78497, 78824, 79251, 79824, 80026,
             80151, 80270, 80389, 80516, 80591, 80632, 80668, 80685, 80699,
             80708, 80725, 80729, 80733, 80737, 80738, 80739, 80739}),
        "cumulative confirmed epidemic cases, 35 daily counts",
    };
    return ds;
}

} // namespace udefit
