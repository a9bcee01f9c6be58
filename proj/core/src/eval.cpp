#include "fts/eval.hpp"

#include "fts/errors.hpp"

namespace fts {

ConfusionMatrix confusion_matrix(std::span<const Terrain> predicted,
                                 std::span<const Terrain> truth) {
    if (truth.empty()) throw DataError("confusion matrix of empty input");
    if (predicted.size() != truth.size())
        throw DataError("prediction and truth lengths differ");

    std::vector<std::vector<std::size_t>> counts(kTerrainCount,
                                                 std::vector<std::size_t>(kTerrainCount, 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto a = static_cast<std::size_t>(truth[i]);
        const auto p = static_cast<std::size_t>(predicted[i]);
        ++counts[a][p];
        if (a == p) ++correct;
    }

    ConfusionMatrix m;
    m.rows.assign(kTerrainCount, std::vector<double>(kTerrainCount, 0.0));
    m.row_counts.assign(kTerrainCount, 0);
    for (std::size_t a = 0; a < kTerrainCount; ++a) {
        std::size_t total = 0;
        for (const auto c : counts[a]) total += c;
        m.row_counts[a] = total;
        if (total == 0) continue;
        for (std::size_t p = 0; p < kTerrainCount; ++p)
            m.rows[a][p] = 100.0 * static_cast<double>(counts[a][p]) /
                           static_cast<double>(total);
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    return m;
}

}  // namespace fts
