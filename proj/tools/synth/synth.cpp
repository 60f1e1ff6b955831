// Generator for the bundled synthetic news corpus and a scripted rater that
// answers `sentikit annotate` prompts from the hidden gold labels.
#include <array>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/sampling.hpp"
#include "sentikit/util.hpp"

namespace {

using Bank = std::vector<std::string>;
using Rng = std::mt19937_64;

const std::string& any(const Bank& b, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
  return b[pick(rng)];
}

bool chance(double p, Rng& rng) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

struct Topic {
  std::string sector;
  int count;
  Bank subjects, pos_events, neg_events, pos_reasons, neg_reasons;
};

std::vector<Topic> topics() {
  const Bank market_pos = {"surges", "gains", "rallies", "jumps", "climbs", "soars", "rises", "hits record high",
                           "beats estimates", "extends gains"};
  const Bank market_neg = {"falls", "slips", "plunges", "tumbles", "declines", "crashes", "slumps",
                           "drops sharply", "misses estimates", "extends losses"};
  const Bank market_pos_why = {"strong quarterly profit", "robust demand", "an upbeat outlook", "record growth",
                               "foreign inflows", "improved margins", "a healthy dividend", "a successful launch",
                               "higher orders", "easing inflation"};
  const Bank market_neg_why = {"weak earnings", "rising debt", "heavy losses", "a bleak outlook", "loan defaults",
                               "foreign outflows", "falling margins", "a regulatory penalty", "a fraud probe",
                               "slowing demand"};
  return {
      {"Stocks", 420,
       {"Sensex", "Nifty", "HDFC Bank", "Infosys", "Tata Motors", "Reliance", "Wipro", "ICICI Bank",
        "Adani Ports", "Maruti", "Bank Nifty", "Midcap index", "TCS", "Bajaj Finance", "SBI"},
       market_pos, market_neg, market_pos_why, market_neg_why},
      {"Economy & Banking", 80,
       {"RBI", "GDP growth", "the rupee", "bank credit", "GST collections", "forex reserves", "PSU banks",
        "the fiscal deficit", "retail inflation", "exports"},
       {"improves", "strengthens", "recovers", "beats forecasts", "rises"},
       {"weakens", "worsens", "slows", "misses forecasts", "deteriorates"},
       {"stronger tax revenue", "healthy credit demand", "a stable currency", "rising investment",
        "better harvests"},
       {"bad loans", "a widening deficit", "capital flight", "weak consumption", "stubborn inflation"}},
      {"Politics & India", 200,
       {"The government", "The opposition", "Parliament", "The Chief Minister", "The Election Commission",
        "The Supreme Court", "The ruling party", "State officials"},
       {"wins praise", "celebrates victory", "welcomes reforms", "secures support", "earns applause"},
       {"faces protests", "is criticised", "is hit by scandal", "suffers defeat", "faces angry backlash"},
       {"a popular welfare scheme", "a peaceful election", "faster relief work", "a landmark ruling",
        "cleaner governance"},
       {"alleged corruption", "violent clashes", "a failed policy", "rising unemployment", "a bitter dispute"}},
      {"International", 120,
       {"The UN", "The US President", "China", "The EU", "Japan", "NATO", "Brazil", "The World Bank"},
       {"hails agreement", "celebrates breakthrough", "welcomes ceasefire", "praises cooperation"},
       {"condemns attack", "warns of crisis", "faces sanctions", "mourns victims"},
       {"a historic peace deal", "successful talks", "generous aid", "a trade breakthrough"},
       {"a deadly conflict", "a humanitarian disaster", "a terror attack", "collapsing talks"}},
      {"Entertainment", 60,
       {"The film", "The actor", "The new series", "The singer", "The festival"},
       {"wins awards", "delights fans", "earns rave reviews", "breaks records"},
       {"flops badly", "disappoints fans", "draws harsh criticism", "is cancelled"},
       {"a brilliant performance", "a charming story", "a superb soundtrack"},
       {"a boring plot", "a terrible script", "an ugly controversy"}},
      {"Sports", 50,
       {"India", "The home team", "The captain", "The young striker", "The champion"},
       {"wins title", "beats rivals", "celebrates big win", "sets new record"},
       {"loses final", "suffers injury", "crashes out", "is dropped"},
       {"a brilliant century", "superb fitness", "a great comeback"},
       {"a painful injury", "poor form", "a shocking defeat"}},
      {"Tech", 40,
       {"The startup", "The smartphone maker", "The app", "The chipmaker"},
       {"launches hit product", "raises funding", "wins users", "impresses reviewers"},
       {"suffers data breach", "lays off staff", "faces outage", "loses users"},
       {"an innovative design", "strong user growth", "a generous investor"},
       {"a security flaw", "mounting losses", "a failed update"}},
      {"Auto", 30,
       {"The carmaker", "The EV maker", "Two-wheeler sales", "The truck maker"},
       {"posts strong sales", "wins orders", "expands capacity"},
       {"recalls vehicles", "cuts output", "reports weak sales"},
       {"festive demand", "a popular new model", "cheaper batteries"},
       {"a chip shortage", "costly recalls", "sluggish demand"}},
  };
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string percent(Rng& rng) {
  std::uniform_int_distribution<int> whole(0, 9), tenth(1, 9);
  return std::to_string(whole(rng)) + "." + std::to_string(tenth(rng)) + "%";
}

struct Article {
  nlohmann::ordered_json json;
  int label;
};

Article make_article(const Topic& t, int index, Rng& rng) {
  int label = chance(0.5, rng) ? 1 : 0;
  const Bank& events = label ? t.pos_events : t.neg_events;
  const Bank& reasons = label ? t.pos_reasons : t.neg_reasons;
  const Bank& counter = label ? t.neg_reasons : t.pos_reasons;
  std::string subject = any(t.subjects, rng);
  std::string event = any(events, rng);
  std::string reason = any(reasons, rng);

  std::string headline = subject + " " + event;
  if (t.sector == "Stocks" || t.sector == "Economy & Banking") headline += " " + percent(rng);
  headline += " on " + reason;
  if (chance(0.08, rng)) headline += "!";

  std::string synopsis;
  int shape = std::uniform_int_distribution<int>(0, 9)(rng);
  if (shape < 6) {
    synopsis = "Analysts said " + reason + (label ? " should keep the momentum going." : " could weigh on sentiment.");
  } else if (shape < 8) {
    // Mixed message: the clause after "but" carries the gold polarity.
    synopsis = label ? "There were worries about " + any(counter, rng) + ", but the news is GOOD for now."
                     : "There was hope from " + any(counter, rng) + ", but the picture is BAD for now.";
  } else {
    synopsis = label ? "Not a bad day at all for " + subject + "." : "Not a good day for " + subject + ".";
  }

  std::string full;
  int fshape = std::uniform_int_distribution<int>(0, 9)(rng);
  if (fshape == 0) {
    full = label ? "Up " + percent(rng) : "Down " + percent(rng);  // too short once cleaned
  } else {
    full = capitalize(headline) + ". " + synopsis + " ";
    full += label ? "Officials described the development as encouraging and expect further improvement. "
                  : "Officials described the development as worrying and expect further trouble. ";
    if (chance(0.5, rng)) full += "Market watchers pointed to " + any(reasons, rng) + " as well. ";
    if (chance(0.2, rng)) full += label ? "Investors cheered!!" : "Investors panicked!!";
  }

  std::uniform_int_distribution<int> year(2017, 2021), month(1, 12), day(1, 28), hour(0, 23), minute(0, 59);
  char date[40];
  std::snprintf(date, sizeof date, "%04d-%02d-%02dT%02d:%02d:00+05:30", year(rng), month(rng), day(rng), hour(rng),
                minute(rng));
  char id[16];
  std::snprintf(id, sizeof id, "art-%04d", index);

  nlohmann::ordered_json j = {{"id", id},
                              {"publish_datetime", date},
                              {"update_datetime", nullptr},
                              {"headline", headline},
                              {"synopsis", synopsis},
                              {"sector", t.sector},
                              {"full_text", full}};
  if (chance(0.05, rng)) j["synopsis"] = nullptr;
  return {j, label};
}

int run_corpus(const std::string& output, const std::string& gold, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Article> articles;
  int index = 1;
  for (const auto& t : topics())
    for (int k = 0; k < t.count; ++k) articles.push_back(make_article(t, index++, rng));
  // Shuffle so ids do not reveal the sector.
  for (std::size_t i = articles.size(); i > 1; --i)
    std::swap(articles[i - 1], articles[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)]);

  std::string text, labels = "article_id,label\n";
  for (std::size_t i = 0; i < articles.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "art-%04zu", i + 1);
    articles[i].json["id"] = id;
    text += articles[i].json.dump() + "\n";
    labels += std::string(id) + "," + (articles[i].label ? "positive" : "negative") + "\n";
  }
  // Records the drop rule removes, and one line the reader rejects.
  for (int k = 1; k <= 6; ++k) {
    char id[16];
    std::snprintf(id, sizeof id, "drop-%02d", k);
    text += nlohmann::ordered_json({{"id", id},
                                    {"publish_datetime", "2020-01-0" + std::to_string(k) + "T10:00:00+05:30"},
                                    {"headline", "Markets await policy decision"},
                                    {"synopsis", nullptr},
                                    {"sector", "Stocks"},
                                    {"full_text", nullptr}})
                .dump() +
            "\n";
  }
  text += "{\"id\": \"broken\", \"headline\": \n";
  sentikit::write_file(output, text);
  sentikit::write_file(gold, labels);
  std::cerr << "wrote " << articles.size() << " articles (+6 drop-rule records, 1 malformed line)\n";
  return 0;
}

int run_answers(const std::string& items_path, const std::string& mask_path, const std::string& gold_path,
                const std::string& rater, double noise, std::uint64_t seed) {
  std::map<std::string, std::string> unmask;
  for (const auto& [id, masked] : sentikit::sampling::read_mask_table(mask_path)) unmask[masked] = id;
  std::map<std::string, int> gold;
  auto rows = sentikit::csv::parse(sentikit::read_file(gold_path));
  for (std::size_t i = 1; i < rows.size(); ++i) gold[rows[i].at(0)] = rows[i].at(1) == "positive" ? 1 : -1;

  Rng rng(sentikit::derive_seed(seed, "rater/" + rater));
  for (const auto& line : sentikit::split(sentikit::read_file(items_path), '\n')) {
    if (sentikit::trim(line).empty()) continue;
    auto masked = nlohmann::json::parse(line).at("masked_id").get<std::string>();
    int sign = gold.at(unmask.at(masked));
    if (chance(noise, rng)) sign = -sign;
    int magnitude = chance(0.35, rng) ? 2 : 1;
    std::cout << sign * magnitude << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sentikit-synth: synthetic corpus and scripted raters"};
  app.require_subcommand(1);
  std::uint64_t seed = 7;
  app.add_option("--seed", seed, "generator seed");

  std::string output, gold;
  auto* corpus = app.add_subcommand("corpus", "write the synthetic raw corpus and its hidden gold labels");
  corpus->add_option("--output", output, "raw JSONL")->required();
  corpus->add_option("--gold", gold, "gold labels CSV")->required();

  std::string items, mask, rater;
  double noise = 0.12;
  auto* answers = app.add_subcommand("answers", "print one rater's answers for an annotation item file");
  answers->add_option("--items", items)->required()->check(CLI::ExistingFile);
  answers->add_option("--mask-table", mask)->required()->check(CLI::ExistingFile);
  answers->add_option("--gold", gold)->required()->check(CLI::ExistingFile);
  answers->add_option("--rater", rater)->required();
  answers->add_option("--noise", noise, "probability of answering with the wrong sign");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*corpus) return run_corpus(output, gold, seed);
    return run_answers(items, mask, gold, rater, noise, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
