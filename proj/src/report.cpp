#include "ticketclass/report.hpp"

#include <json.hpp>

#include <sstream>

namespace ticketclass {

using nlohmann::json;

namespace {

json setting_json(const SettingConfig& setting) {
    json hidden = json::array();
    for (const std::size_t size : setting.mlp.hidden_layers) {
        hidden.push_back(size);
    }
    json out = {
        {"setting", setting.id},
        {"pipeline",
         {{"ngram_min", setting.pipeline.ngram_min},
          {"ngram_max", setting.pipeline.ngram_max},
          {"max_df_ratio", setting.pipeline.max_df_ratio},
          {"min_df_docs", setting.pipeline.min_df_docs},
          {"summary_repeats", setting.pipeline.summary_repeats},
          {"sublinear_tf", setting.pipeline.sublinear_tf}}},
        {"mlp",
         {{"hidden_layers", hidden},
          {"activation", to_string(setting.mlp.activation)},
          {"learning_rate", to_string(setting.mlp.learning_rate)},
          {"initial_lr", setting.mlp.initial_lr},
          {"momentum", setting.mlp.momentum},
          {"max_iter", setting.mlp.max_iter},
          {"batch_size", setting.mlp.batch_size},
          {"tol", setting.mlp.tol},
          {"seed", setting.mlp.seed}}},
        {"mlp_source", to_string(setting.mlp_source)}};
    if (setting.select_k) {
        out["select_k"] = *setting.select_k;
    } else {
        out["select_k"] = nullptr;
    }
    return out;
}

json summary_json(const MetricSummary& summary) {
    return {{"mean", summary.mean}, {"ci95", summary.ci95_half}, {"folds", summary.folds}};
}

json fold_report_json(const FoldReport& report) {
    return {{"scope", report.scope},
            {"precision", summary_json(report.precision)},
            {"recall", summary_json(report.recall)},
            {"f1", summary_json(report.f1)},
            {"accuracy", summary_json(report.accuracy)}};
}

json report_json(const SettingReport& report) {
    json scopes = json::array();
    for (const auto& project : report.per_project) {
        scopes.push_back(fold_report_json(project));
    }
    scopes.push_back(fold_report_json(report.cross_project));
    return {{"config", setting_json(report.setting)},
            {"reports", scopes},
            {"mean_projects_f1", report.mean_projects_f1},
            {"warnings", report.warnings}};
}

void fold_report_rows(std::ostringstream& out, const SettingReport& report) {
    auto row = [&](const FoldReport& fold_report) {
        auto metric = [&](const char* name, const MetricSummary& summary) {
            out << report.setting.id << '\t' << fold_report.scope << '\t' << name << '\t'
                << summary.mean << '\t' << summary.ci95_half << '\t';
            for (std::size_t f = 0; f < summary.folds.size(); ++f) {
                out << (f ? "," : "") << summary.folds[f];
            }
            out << '\n';
        };
        metric("precision", fold_report.precision);
        metric("recall", fold_report.recall);
        metric("f1", fold_report.f1);
        metric("accuracy", fold_report.accuracy);
    };
    for (const auto& project : report.per_project) {
        row(project);
    }
    row(report.cross_project);
    out << report.setting.id << "\tmean-projects\tf1\t" << report.mean_projects_f1 << "\t0\t\n";
}

}  // namespace

std::string setting_config_to_json(const SettingConfig& setting) {
    return setting_json(setting).dump(2);
}

std::string setting_report_to_tsv(const SettingReport& report) {
    std::ostringstream out;
    out << "# config: " << setting_json(report.setting).dump() << '\n';
    for (const auto& warning : report.warnings) {
        out << "# warning: " << warning << '\n';
    }
    out << "setting\tscope\tmetric\tmean\tci95_half\tfolds\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    fold_report_rows(out, report);
    return out.str();
}

std::string setting_report_to_json(const SettingReport& report) {
    return report_json(report).dump(2);
}

std::string ablation_to_tsv(const std::vector<SettingReport>& reports) {
    std::ostringstream out;
    for (const auto& report : reports) {
        out << "# config: " << setting_json(report.setting).dump() << '\n';
    }
    out << "setting\tscope\tmetric\tmean\tci95_half\tfolds\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto& report : reports) {
        fold_report_rows(out, report);
    }
    return out.str();
}

std::string ablation_to_json(const std::vector<SettingReport>& reports) {
    json out = json::array();
    for (const auto& report : reports) {
        out.push_back(report_json(report));
    }
    return out.dump(2);
}

}  // namespace ticketclass
