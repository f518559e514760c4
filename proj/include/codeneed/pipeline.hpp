#pragma once
// Glue between the corpus, features and models layers: builds feature
// matrices for a labeled corpus against a frozen schema.

#include <cstdint>
#include <vector>

#include "codeneed/corpus.hpp"
#include "codeneed/features.hpp"
#include "codeneed/models/model.hpp"
#include "codeneed/postag.hpp"

namespace codeneed::pipeline {

struct FeatureTable {
    std::vector<std::int64_t> ids;
    std::vector<int> labels; // 1 = needs-code
    std::vector<features::FeatureVector> vectors;
    models::Matrix X;
};

inline FeatureTable build_features(const std::vector<corpus::LabeledQuestion>& questions,
                                   const features::FeatureSchema& schema,
                                   const textprep::TextResources& res,
                                   const postag::Tagger& tagger) {
    FeatureTable table;
    table.X = models::Matrix(questions.size(), schema.vector_length());
    for (std::size_t i = 0; i < questions.size(); ++i) {
        const auto& lq = questions[i];
        table.ids.push_back(lq.question.id);
        table.labels.push_back(lq.label.needs_code ? 1 : 0);
        features::FeatureVector fv = features::featurize(lq.question, schema, res, tagger);
        auto row = fv.to_row();
        for (std::size_t c = 0; c < row.size(); ++c) table.X.at(i, c) = row[c];
        table.vectors.push_back(std::move(fv));
    }
    return table;
}

} // namespace codeneed::pipeline
