// Writes the stemmer test vocabulary: ~23k words paired with the output of
// the transcribed reference implementation (tests/support/porter_reference.hpp).
// Run once; the TSV is committed under tests/fixtures/ and frozen.
//
// Usage: gen_porter_fixture <output.tsv>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/porter_reference.hpp"

namespace {

const char* kBases[] = {
    "connect", "relate", "condition", "ration", "oper", "access", "apply", "argue", "arrange",
    "assign", "assist", "assume", "attach", "attend", "attract", "avoid", "balance", "behave",
    "believe", "belong", "borrow", "bounce", "breathe", "calculate", "cancel", "capture", "care",
    "carry", "cause", "celebrate", "challenge", "change", "charge", "chase", "check", "claim",
    "classify", "clean", "clear", "click", "climb", "close", "collect", "combine", "comfort",
    "command", "comment", "communicate", "compare", "compete", "compile", "complain", "complete",
    "compute", "concern", "conclude", "confirm", "confuse", "consider", "consist", "construct",
    "consult", "consume", "contain", "continue", "contribute", "control", "convert", "convince",
    "cook", "copy", "correct", "count", "cover", "crash", "create", "cross", "cry", "damage",
    "dance", "debate", "decide", "declare", "decorate", "decrease", "defend", "define", "deliver",
    "demand", "demonstrate", "deny", "depend", "describe", "deserve", "design", "destroy",
    "detect", "determine", "develop", "differ", "direct", "disagree", "discover", "discuss",
    "display", "distribute", "divide", "dominate", "double", "doubt", "drag", "dream", "dress",
    "drop", "earn", "educate", "elect", "embarrass", "emphasize", "employ", "enable", "encourage",
    "engage", "enjoy", "enter", "entertain", "escape", "establish", "estimate", "evaluate",
    "examine", "exchange", "excite", "excuse", "execute", "exercise", "exist", "expand", "expect",
    "experiment", "explain", "explore", "express", "extend", "face", "fail", "fasten", "favor",
    "fetch", "file", "fill", "filter", "finish", "fire", "fit", "fix", "flash", "float", "flood",
    "flow", "fold", "follow", "force", "form", "formalize", "found", "frame", "function", "gather",
    "general", "generate", "govern", "grab", "grant", "greet", "guarantee", "guard", "guess",
    "guide", "handle", "happen", "harass", "harm", "hate", "heal", "heat", "help", "hesitate",
    "hope", "hurry", "identify", "ignore", "illustrate", "imagine", "implement", "import",
    "impress", "improve", "include", "increase", "indicate", "influence", "inform", "initial",
    "inject", "injure", "insist", "install", "instruct", "insult", "intend", "interest",
    "interfere", "interpret", "interrupt", "introduce", "invent", "invest", "investigate",
    "invite", "involve", "iterate", "join", "judge", "jump", "justify", "kick", "kiss", "knock",
    "label", "land", "last", "laugh", "launch", "learn", "lie", "lift", "link", "list", "listen",
    "live", "load", "locate", "lock", "look", "love", "manage", "manipulate", "march", "mark",
    "marry", "match", "matter", "measure", "mention", "merge", "migrate", "mind", "miss", "mix",
    "modify", "monitor", "motor", "mount", "move", "multiply", "name", "navigate", "need",
    "neglect", "negotiate", "note", "notice", "notify", "number", "obey", "object", "observe",
    "obtain", "occupy", "occur", "offend", "offer", "open", "order", "organize", "oscillate",
    "overlap", "overwrite", "owe", "own", "pack", "paint", "park", "parse", "participate",
    "pass", "pause", "perform", "permit", "persist", "persuade", "pick", "place", "plan", "plant",
    "play", "plaster", "point", "polish", "populate", "possess", "post", "pour", "practice",
    "predicate", "predict", "prefer", "prepare", "present", "preserve", "press", "pretend",
    "prevent", "print", "probate", "proceed", "process", "produce", "program", "promise",
    "promote", "pronounce", "propose", "protect", "prove", "provide", "publish", "pull", "pump",
    "punish", "push", "qualify", "question", "queue", "quote", "race", "rate", "reach", "react",
    "read", "realize", "receive", "recognize", "recommend", "record", "recover", "reduce",
    "refer", "reflect", "refresh", "refuse", "register", "regret", "reject", "relax", "release",
    "relieve", "rely", "remain", "remember", "remind", "remove", "rename", "render", "rent",
    "repair", "repeat", "replace", "reply", "report", "represent", "request", "require", "rescue",
    "research", "reserve", "resize", "resolve", "respect", "respond", "restore", "restrict",
    "result", "resume", "retire", "retry", "reveal", "revive", "reward", "rotate", "route",
    "rub", "rule", "rush", "sail", "sample", "satisfy", "scale", "scan", "scatter", "schedule",
    "score", "scratch", "scream", "search", "seat", "secure", "select", "sense", "separate",
    "serve", "settle", "shake", "shape", "share", "shift", "shout", "sign", "signal", "size",
    "ski", "skip", "slice", "slide", "slip", "smell", "smile", "solve", "sort", "sound", "spare",
    "spell", "spill", "spoil", "spray", "squeeze", "stare", "start", "state", "stay", "stem",
    "stick", "store", "stream", "stress", "stretch", "strike", "struggle", "study", "submit",
    "subtract", "succeed", "suffer", "suggest", "suit", "supply", "support", "suppose",
    "surprise", "surround", "survive", "suspect", "switch", "synchronize", "tag", "talk",
    "target", "taste", "tend", "terminate", "test", "thank", "threaten", "tie", "time", "toggle",
    "touch", "trace", "track", "trade", "train", "transfer", "transform", "translate",
    "transmit", "trap", "travel", "treat", "tremble", "trigger", "trouble", "trust", "try",
    "tune", "turn", "type", "uncover", "update", "upgrade", "upload", "use", "validate", "value",
    "vanish", "verify", "visit", "wait", "walk", "wander", "warn", "wash", "waste", "watch",
    "wave", "weigh", "welcome", "whisper", "wish", "wonder", "worry", "wrap", "zoom",
    "electric", "sensible", "sensitive", "angular", "homolog", "gyroscope", "triplicate",
    "formal", "decisive", "callous", "feudal", "vietnam", "bowdler", "defense", "irritate",
    "adjust", "adopt", "commune", "activate", "effect", "infer", "airline", "allow", "depend",
    "conform", "radical", "different", "vile", "analogy", "archaeology", "christian", "digit",
    "valence", "hesitance", "conflate", "trouble", "hiss", "fizz", "fail", "motor", "plaster",
    "sky", "happy", "pony", "caress", "cat", "feed", "agree", "bleed", "sing", "hop", "tan",
    "fall",
};

const char* kSuffixes[] = {
    "",        "s",      "es",      "ed",     "ing",     "ings",    "er",      "ers",
    "est",     "ly",     "ness",    "nesses", "ment",    "ments",   "ion",     "ions",
    "ation",   "ations", "ization", "izer",   "ize",     "izes",    "ized",    "izing",
    "ful",     "fully",  "fulness", "less",   "able",    "ible",    "al",      "ally",
    "ality",   "alism",  "alize",   "ous",    "ously",   "ousness", "ive",     "ively",
    "iveness", "ity",    "ities",   "ism",    "isms",    "ance",    "ances",   "ence",
    "ences",   "ant",    "ants",    "ent",    "ently",   "ator",    "ators",   "y",
    "ies",     "ied",    "ier",     "iest",   "eed",     "icate",   "ative",   "iciti",
    "ical",    "icalli", "biliti",  "logi",   "aliti",   "iviti",   "ational", "tional",
    "enci",    "anci",   "abli",    "alli",   "entli",   "eli",     "ousli",
};

std::string random_word(std::mt19937_64& gen) {
    static const std::string consonants = "bcdfghjklmnpqrstvwxz";
    static const std::string vowels = "aeiouy";
    std::string w;
    int syllables = 1 + static_cast<int>(gen() % 4);
    for (int s = 0; s < syllables; ++s) {
        if (gen() % 3 != 0) w += consonants[gen() % consonants.size()];
        w += vowels[gen() % vowels.size()];
        if (gen() % 2 == 0) w += consonants[gen() % consonants.size()];
        if (gen() % 7 == 0) w += w.back(); // occasional doubled consonant
    }
    return w;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_porter_fixture <output.tsv>\n";
        return 2;
    }
    std::set<std::string> vocabulary;
    for (const char* base : kBases)
        for (const char* suffix : kSuffixes) vocabulary.insert(std::string(base) + suffix);

    std::mt19937_64 gen(20230801);
    while (vocabulary.size() < 23000) vocabulary.insert(random_word(gen));

    std::ofstream out(argv[1], std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << argv[1] << "\n";
        return 2;
    }
    for (const auto& word : vocabulary) out << word << '\t' << porter_ref::stem(word) << '\n';
    std::cout << "wrote " << vocabulary.size() << " pairs to " << argv[1] << "\n";
    return 0;
}
