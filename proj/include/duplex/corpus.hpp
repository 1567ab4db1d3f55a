#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "duplex/scenario.hpp"

namespace duplex {

enum class ScenarioClass { Smooth, SuccessfulInterruption, Backchannel, BargeIn, Ceding, Delayed, Ignored, Semantic };

inline constexpr std::array<ScenarioClass, 8> kScenarioClasses{
    ScenarioClass::Smooth,  ScenarioClass::SuccessfulInterruption, ScenarioClass::Backchannel,
    ScenarioClass::BargeIn, ScenarioClass::Ceding,                 ScenarioClass::Delayed,
    ScenarioClass::Ignored, ScenarioClass::Semantic};

inline std::string_view to_string(ScenarioClass c) {
  switch (c) {
    case ScenarioClass::Smooth: return "smooth";
    case ScenarioClass::SuccessfulInterruption: return "successful_interruption";
    case ScenarioClass::Backchannel: return "backchannel";
    case ScenarioClass::BargeIn: return "barge_in";
    case ScenarioClass::Ceding: return "ceding";
    case ScenarioClass::Delayed: return "delayed";
    case ScenarioClass::Ignored: return "ignored";
    case ScenarioClass::Semantic: return "semantic";
  }
  return "?";
}

inline std::optional<ScenarioClass> parse_scenario_class(std::string_view s) {
  for (auto c : kScenarioClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

struct CorpusMix {
  std::map<ScenarioClass, int> counts;
  std::uint64_t seed = 0;

  int total() const {
    int n = 0;
    for (const auto& [c, k] : counts) n += k;
    return n;
  }
  void validate() const {
    for (const auto& [c, k] : counts) {
      if (k < 0) throw ValidationError("corpus counts must be non-negative");
    }
    if (total() <= 0) throw ValidationError("corpus mix requests no scenarios");
  }
};

/// Script documents per class. Marker-free turns get seeded word-count jitter;
/// pause directives of delayed scenarios are redrawn.
using TemplateSet = std::map<ScenarioClass, std::vector<json>>;

struct CorpusEntry {
  ScenarioClass scenario_class;
  std::uint64_t seed;
  json script;
  CompiledScenario compiled;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t child_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(splitmix64(seed) ^ (0xD1B54A32D192ED03ULL * (index + 1)));
}

inline const std::array<std::vector<std::string>, 4>& filler_tails() {
  static const std::array<std::vector<std::string>, 4> tails{{
      {""},
      {"please", "today", "now", "though"},
      {"for me", "right now", "if possible", "this week"},
      {"when you can", "for the team", "if that works", "by the weekend"},
  }};
  return tails;
}

// Inserts ", <tail>" before the closing punctuation of the text.
inline std::string with_tail(const std::string& text, const std::string& tail) {
  if (tail.empty()) return text;
  std::size_t cut = text.size();
  while (cut > 0 && (text[cut - 1] == '.' || text[cut - 1] == '?' || text[cut - 1] == '!')) --cut;
  return text.substr(0, cut) + ", " + tail + text.substr(cut);
}

inline json jitter_script(const json& tmpl, ScenarioClass cls, std::mt19937_64& rng) {
  json doc = tmpl;
  bool after_anchor = false;  // a plain turn right after an inline [BC] is a short acknowledgement
  for (auto& item : doc.at("dialogue")) {
    if (item.contains("pause")) {
      if (cls == ScenarioClass::Delayed) {
        item["pause"] = std::to_string(3500 + static_cast<int>(rng() % 16) * 100) + "ms";
      }
      after_anchor = false;
      continue;
    }
    const std::string text = item.at("text").get<std::string>();
    const bool marker_free = text.find('[') == std::string::npos;
    if (marker_free && !after_anchor) {
      const auto& tails = filler_tails()[rng() % 4];
      item["text"] = with_tail(text, tails[rng() % tails.size()]);
    }
    const auto anchor = detail::lowercase(text).find("[bc]");
    after_anchor = anchor != std::string::npos && anchor > 0;
  }
  return doc;
}

}  // namespace detail

/// Built-in template pools, one list per scenario class.
inline const TemplateSet& builtin_templates() {
  static const TemplateSet set = [] {
    TemplateSet t;
    t[ScenarioClass::Smooth] = {
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "I want to draft an agenda for a short onboarding session."},
          {"speaker": "Assistant", "text": "Sure. Open with introductions, then cover tools and policies, and finish with questions."},
          {"speaker": "User", "text": "Please add a short quiz at the end."},
          {"speaker": "Assistant", "text": "Got it. I will include a five question quiz and a printable checklist."}
        ], "event_type": "Smooth_Turn_Transition"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "What is a good way to start learning the guitar?"},
          {"speaker": "Assistant", "text": "Begin with a few open chords and practice switching between them slowly every day."},
          {"speaker": "User", "text": "How long should each practice session be?"},
          {"speaker": "Assistant", "text": "Twenty focused minutes a day works better than one long session each week."}
        ], "event_type": "Smooth_Turn_Transition"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Can you recommend a light dinner for tonight?"},
          {"speaker": "Assistant", "text": "A grilled vegetable salad with chickpeas and lemon dressing is quick and filling."},
          {"speaker": "User", "text": "That sounds good, what should I drink with it?"},
          {"speaker": "Assistant", "text": "Sparkling water with mint or a crisp white wine would pair nicely."},
          {"speaker": "User", "text": "Great, I will try that tonight."},
          {"speaker": "Assistant", "text": "Enjoy your meal and let me know how it turns out."}
        ], "event_type": "Smooth_Turn_Transition"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "My laptop battery drains very quickly lately."},
          {"speaker": "Assistant", "text": "Lower the screen brightness and check which apps use the most power in settings."},
          {"speaker": "User", "text": "The browser is using most of it."},
          {"speaker": "Assistant", "text": "Try closing unused tabs and disabling extensions you do not need."}
        ], "event_type": "Smooth_Turn_Transition"})"),
    };
    t[ScenarioClass::SuccessfulInterruption] = {
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "I need to configure my new router, can you help?"},
          {"speaker": "Assistant", "text": "Certainly. First, connect your computer to the router using an Ethernet cable. Then, open a web browser and type in the default IP address, which is usually 192.168.1.1, [INTERACT] into the address bar."},
          {"speaker": "User", "text": "Actually, I'm on a new laptop without an Ethernet port. Is there a wireless setup option?"},
          {"speaker": "Assistant", "text": "Thanks for the heads-up. In that case, connect to the router's default Wi-Fi network first, then open a browser and go to the setup page."}
        ], "event_type": "Successful_Interruption"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Book me a table for two on Friday evening."},
          {"speaker": "Assistant", "text": "Sure. I found a table at the harbour grill for seven, and I can also add [INTERACT] a dessert platter to the order."},
          {"speaker": "User", "text": "Wait, make it eight instead of seven please."},
          {"speaker": "Assistant", "text": "No problem. The table for two is now booked for eight on Friday."}
        ], "event_type": "Successful_Interruption"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Tell me how to reset my email password."},
          {"speaker": "Assistant", "text": "Open the account page, choose security, and then you will see [interrupt] the option to change your password."},
          {"speaker": "User", "text": "Sorry, I cannot even log in to the account page."},
          {"speaker": "Assistant", "text": "Then use the forgot password link on the sign in screen to get a reset email."}
        ], "event_type": "Successful_Interruption"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "I am going to unplug the heater while it is still running and [INTERACT] move it to the bedroom."},
          {"speaker": "Assistant", "text": "Please switch it off first and let it cool down before moving it."},
          {"speaker": "User", "text": "Good idea, I will wait until it cools."}
        ], "event_type": "Successful_Interruption", "justified_interruption": true})"),
    };
    t[ScenarioClass::Backchannel] = {
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "I want to draft an agenda for a 45 minute onboarding session. Can you propose a simple structure?"},
          {"speaker": "Assistant", "text": "Sure. We can open with introductions and a quick company overview [PAUSE] then cover key tools and policies. [BC]"},
          {"speaker": "User", "text": "[BC] Right."},
          {"speaker": "Assistant", "text": "We will finish with a short Q and A, and I will suggest timing for each segment."},
          {"speaker": "User", "text": "Please add a short quiz at the end [PAUSE] [BC]"},
          {"speaker": "Assistant", "text": "[BC] Okay."},
          {"speaker": "User", "text": "and a printable checklist for new hires."},
          {"speaker": "Assistant", "text": "Got it. I will include a five question quiz and prepare a one page checklist for them to print."}
        ], "event_type": "Backchannel"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "How do I repot a large houseplant?"},
          {"speaker": "Assistant", "text": "Water it a day before so the roots loosen, [BC] then tip the pot sideways and slide the plant out gently."},
          {"speaker": "User", "text": "[BC] Uh-huh."},
          {"speaker": "User", "text": "What kind of soil should I use?"},
          {"speaker": "Assistant", "text": "A general potting mix with some perlite for drainage works well for most plants."}
        ], "event_type": "Backchannel"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "I am planning a road trip from Denver to Seattle next month [BC]"},
          {"speaker": "Assistant", "text": "[BC] Mm-hmm."},
          {"speaker": "User", "text": "and I would like a few scenic stops along the way."},
          {"speaker": "Assistant", "text": "Consider Yellowstone, the Columbia River Gorge, and a night in Missoula."}
        ], "event_type": "Backchannel"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Explain how compound interest works."},
          {"speaker": "Assistant", "text": "Each period you earn interest on the original amount [BC]"},
          {"speaker": "User", "text": "[BC] I see."},
          {"speaker": "Assistant", "text": "and also on all the interest that has already been added to it."},
          {"speaker": "User", "text": "So the growth speeds up over time."},
          {"speaker": "Assistant", "text": "Exactly, which is why starting early makes such a large difference."}
        ], "event_type": "Backchannel"})"),
    };
    t[ScenarioClass::BargeIn] = {
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "I'm trying to set up a new project management board for the team, and I was thinking of using that new tool, you know, the one called... [PAUSE] monday.com."},
          {"speaker": "Assistant", "text": "[barge_in] Of course! I can help with that. Are you thinking of something like Trello or Asana? They're both excellent for team projects."}
        ], "error_type": "Inappropriate_Barge_in"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Can you find me a flight to Lisbon that leaves on [PAUSE] Thursday morning?"},
          {"speaker": "Assistant", "text": "[barge_in] Sure, there are several flights to Lisbon leaving on Wednesday evening from your nearest airport."}
        ], "error_type": "Inappropriate_Barge_in"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Remind me to call my sister about the [PAUSE] birthday party."},
          {"speaker": "Assistant", "text": "[barge_in] Okay, I have set a reminder to call your sister tomorrow at nine in the morning."}
        ], "error_type": "Inappropriate_Barge_in"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "What is the weather like today?"},
          {"speaker": "Assistant", "text": "It will be sunny with a high of twenty four degrees."},
          {"speaker": "User", "text": "And what about the weekend, especially [PAUSE] Sunday afternoon?"},
          {"speaker": "Assistant", "text": "[barge_in] The weekend looks mostly dry, with a few clouds on Saturday and light wind in the evening."}
        ], "error_type": "Inappropriate_Barge_in"})"),
    };
    t[ScenarioClass::Ceding] = {
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Can you explain the refund process for my recent order?"},
          {"speaker": "Assistant", "text": "Certainly. You will first need to navigate to your order history [BC] and then select the 'Request a Refund' option next to the item."},
          {"speaker": "User", "text": "Okay."},
          {"speaker": "Assistant", "text": "Oh, sorry. Go ahead."}
        ], "error_type": "Overly_Deferential_Ceding"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "How do I change the oil in my car?"},
          {"speaker": "Assistant", "text": "Start by warming up the engine for a few minutes [BC] so the oil drains more easily from the pan."},
          {"speaker": "User", "text": "Yeah."},
          {"speaker": "Assistant", "text": "Sorry, please go on."},
          {"speaker": "User", "text": "I was just agreeing, please continue with the steps."}
        ], "error_type": "Overly_Deferential_Ceding"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Walk me through setting up two factor authentication."},
          {"speaker": "Assistant", "text": "Open your account settings and choose the security tab [BC] where you will find the two step option."},
          {"speaker": "User", "text": "Uh-huh."},
          {"speaker": "Assistant", "text": "Oh, did you want to say something?"}
        ], "error_type": "Overly_Deferential_Ceding"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Give me a quick recipe for pancakes."},
          {"speaker": "Assistant", "text": "Mix one cup of flour with a spoon of sugar [BC] then whisk in an egg and a cup of milk."},
          {"speaker": "User", "text": "Mm-hmm."},
          {"speaker": "Assistant", "text": "Sorry, go ahead."}
        ], "error_type": "Overly_Deferential_Ceding"})"),
    };
    t[ScenarioClass::Delayed] = {
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "I've mapped out our hiking route for Saturday. It's about 10 miles with a steady incline."},
          {"speaker": "Assistant", "text": "Excellent. Have you checked the weather forecast for the summit? Conditions can change quickly up there."},
          {"speaker": "User", "text": "Good point. The forecast says clear skies in the morning, but there's a chance of afternoon showers."},
          {"pause": "4.0s"},
          {"speaker": "Assistant", "text": "Okay, in that case, we should definitely pack our waterproof gear and aim to be heading down by 1 PM at the latest."}
        ], "error_type": "Delayed_Turn_Transition"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "What time does the pharmacy on Main Street close?"},
          {"pause": "4.0s"},
          {"speaker": "Assistant", "text": "The pharmacy on Main Street closes at nine in the evening on weekdays."}
        ], "error_type": "Delayed_Turn_Transition"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Convert fifty dollars to euros for me."},
          {"speaker": "Assistant", "text": "Fifty dollars is roughly forty six euros at the current rate."},
          {"speaker": "User", "text": "And how much is that in British pounds?"},
          {"pause": "4.0s"},
          {"speaker": "Assistant", "text": "That would be about thirty nine pounds at today's exchange rate."}
        ], "error_type": "Delayed_Turn_Transition"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Suggest a name for my new bakery."},
          {"pause": "4.0s"},
          {"speaker": "Assistant", "text": "How about Morning Crumb, it sounds warm and easy to remember."},
          {"speaker": "User", "text": "I like it, can you suggest a slogan too?"},
          {"speaker": "Assistant", "text": "Fresh from our oven to your table every morning."}
        ], "error_type": "Delayed_Turn_Transition"})"),
    };
    t[ScenarioClass::Ignored] = {
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "I'm looking for a good Italian restaurant near downtown."},
          {"speaker": "Assistant", "text": "Of course. One highly-rated option is 'Villa Romano'. It's known for its classic pasta dishes, [user_interrupt_starts] an extensive wine list featuring selections from Tuscany, and a lovely patio for outdoor dining."},
          {"speaker": "User", "text": "[overlaps_assistant] Wait, I'm actually vegan. Do they have options?"}
        ], "error_type": "Ignored_Interruption"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Help me pick a laptop for video editing."},
          {"speaker": "Assistant", "text": "For video editing you want a strong processor and [user_interrupt_starts] at least thirty two gigabytes of memory, a dedicated graphics card, and a fast solid state drive with plenty of space."},
          {"speaker": "User", "text": "[overlaps_assistant] Hold on, my budget is only five hundred dollars."}
        ], "error_type": "Ignored_Interruption"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Plan a weekend trip to the mountains for me."},
          {"speaker": "Assistant", "text": "I suggest driving up on Friday night, staying in a cabin [user_interrupt_starts] near the lake, hiking the ridge trail on Saturday, and visiting the hot springs on Sunday before heading home."},
          {"speaker": "User", "text": "[overlaps_assistant] Stop, I don't have a car."}
        ], "error_type": "Ignored_Interruption"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Read me the steps to bake sourdough bread."},
          {"speaker": "Assistant", "text": "First feed your starter the night before, then mix flour and water [user_interrupt_starts] and let the dough rest for an hour before adding salt and folding it every thirty minutes."},
          {"speaker": "User", "text": "[overlaps_assistant] Wait, I have no starter at all."},
          {"speaker": "Assistant", "text": "You can make one from flour and water over about a week."}
        ], "error_type": "Ignored_Interruption"})"),
    };
    t[ScenarioClass::Semantic] = {
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Please plan my Spain trip: three days in Barcelona first for architecture, then four days in Madrid for museums."},
          {"speaker": "Assistant", "text": "Great. I will begin with Madrid hotel options near the Prado [INTERACT] and arrange museum passes for your first three days before switching to Barcelona."},
          {"speaker": "User", "text": "Small correction: Barcelona comes first, then Madrid."},
          {"speaker": "Assistant", "text": "Understood. I will make sure your museum access is smooth in Madrid during the opening days and shortlist hotels within walking distance of the galleries."},
          {"speaker": "User", "text": "Yes, please include breakfast."}
        ], "error_type": "Contextual_Incoherence_After_Interruption"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Order a large pizza with mushrooms for delivery."},
          {"speaker": "Assistant", "text": "Sure, one large pizza with mushrooms and extra [INTERACT] cheese, delivered to your home address."},
          {"speaker": "User", "text": "Actually, make it olives instead of mushrooms."},
          {"speaker": "Assistant", "text": "Done. Your large mushroom pizza will arrive in about thirty minutes."}
        ], "error_type": "Contextual_Incoherence_After_Interruption"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "What is a healthy breakfast I can make quickly?"},
          {"speaker": "Assistant", "text": "The train to Boston departs from platform four every hour."},
          {"speaker": "User", "text": "That does not answer my question."},
          {"speaker": "Assistant", "text": "Tickets can be bought at the station or online in advance."}
        ], "error_type": "Contextual_Incoherence"})"),
        json::parse(R"({"dialogue": [
          {"speaker": "User", "text": "Set an alarm for six tomorrow morning."},
          {"speaker": "Assistant", "text": "Your alarm is set for six tomorrow evening, enjoy your dinner."},
          {"speaker": "User", "text": "No, I said morning, not evening."},
          {"speaker": "Assistant", "text": "Great, the dinner reservation is confirmed for six."}
        ], "error_type": "Contextual_Incoherence"})"),
    };
    return t;
  }();
  return set;
}

/// Builds one scenario of `cls` from `seed`.
inline CorpusEntry generate_scenario(ScenarioClass cls, std::uint64_t seed, const TemplateSet& templates,
                                     const DurationModel& model) {
  const auto it = templates.find(cls);
  if (it == templates.end() || it->second.empty()) {
    throw ValidationError("empty template pool for class '" + std::string(to_string(cls)) + "'");
  }
  std::mt19937_64 rng(seed);
  const json& tmpl = it->second[rng() % it->second.size()];
  json script = detail::jitter_script(tmpl, cls, rng);
  CompiledScenario compiled = compile(parse_script(script), model);
  return CorpusEntry{cls, seed, std::move(script), std::move(compiled)};
}

/// Seeded corpus; each scenario draws from its own child seed, so any `jobs`
/// value yields the same corpus.
inline std::vector<CorpusEntry> generate_corpus(const CorpusMix& mix, const TemplateSet& templates,
                                                const DurationModel& model, unsigned jobs = 1) {
  mix.validate();
  model.validate();
  std::vector<ScenarioClass> plan;
  for (auto cls : kScenarioClasses) {
    const auto c = mix.counts.find(cls);
    if (c == mix.counts.end()) continue;
    if (c->second > 0 && (!templates.count(cls) || templates.at(cls).empty())) {
      throw ValidationError("empty template pool for class '" + std::string(to_string(cls)) + "'");
    }
    plan.insert(plan.end(), static_cast<std::size_t>(c->second), cls);
  }

  std::vector<std::optional<CorpusEntry>> slots(plan.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < plan.size(); i += stride) {
      slots[i] = generate_scenario(plan[i], detail::child_seed(mix.seed, i), templates, model);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(plan.size())));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned j = 0; j < jobs; ++j) {
      pool.emplace_back([&, j] {
        try {
          work(j, jobs);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<CorpusEntry> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline json corpus_to_json(const std::vector<CorpusEntry>& corpus) {
  json arr = json::array();
  for (const auto& e : corpus) {
    json j = e.compiled.transcript_meta;
    j["scenario_class"] = std::string(to_string(e.scenario_class));
    j["seed"] = e.seed;
    j["script"] = e.script;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace duplex
