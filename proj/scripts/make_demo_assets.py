#!/usr/bin/env python3
"""Generates the offline demo dataset under data/demo/.

Outputs:
  seeds.jsonl         20 hand-written short multiple-choice questions
  corpus.txt          raw distractor passages (blank-line separated)
  corpus_extra.jsonl  more raw passages, one {"text": ...} per line
  synth_script.jsonl  scripted backend replies for the synthesis stages
  eval_script.jsonl   scripted backend replies for the scoring stage

The scripts make the whole pipeline run deterministically with no network.
Every corpus passage mentions the fictional Meridian survey; clue passages
never do, which lets the eval script answer differently when a prompt
contains distractor material (long contexts) versus when it does not.

Self-checks at the bottom mirror the anchor/option rules from
core/src/anchors.cpp and core/src/decompose.cpp so regenerated data cannot
silently violate the pipeline's retention gates.
"""

import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "demo"

# ---------------------------------------------------------------------------
# Mirrors of the C++ text/anchor rules (keep in sync with core/src)

def strip_edges(tok: str) -> str:
    b, e = 0, len(tok)
    while b < e and not tok[b].isalnum():
        b += 1
    while e > b and not tok[e - 1].isalnum():
        e -= 1
    return tok[b:e]


def anchor_words(text: str):
    return [w for w in (strip_edges(t) for t in text.split()) if w]


def starts_capital(tok: str) -> bool:
    return bool(tok) and tok[0].isupper()


def capitalized_spans(s: str, min_words: int):
    toks = [strip_edges(t) for t in s.split()]
    spans, i = [], 0
    while i < len(toks):
        if not starts_capital(toks[i]):
            i += 1
            continue
        j = i
        while j < len(toks) and starts_capital(toks[j]):
            j += 1
        if j - i >= min_words:
            spans.append(" ".join(toks[i:j]))
        i = j
    return spans


def quoted_spans(s: str):
    out, i = [], 0
    while True:
        o = s.find('"', i)
        if o < 0:
            break
        c = s.find('"', o + 1)
        if c < 0:
            break
        inner = " ".join(s[o + 1 : c].split())
        if inner:
            out.append(inner)
        i = c + 1
    return out


def contains_seq(hay, needle) -> bool:
    n = len(needle)
    if n == 0 or n > len(hay):
        return False
    return any(hay[i : i + n] == needle for i in range(len(hay) - n + 1))


def shared_word_runs(a, b, min_len):
    out = set()
    pos_b = {}
    for j, w in enumerate(b):
        pos_b.setdefault(w, []).append(j)
    i = 0
    while i < len(a):
        best = 0
        for j in pos_b.get(a[i], []):
            n = 0
            while i + n < len(a) and j + n < len(b) and a[i + n] == b[j + n]:
                n += 1
            best = max(best, n)
        if best >= min_len:
            out.add(" ".join(a[i : i + best]))
            i += best
        else:
            i += 1
    return out


def extract_anchors(background: str, inquiry: str):
    bw, iw = anchor_words(background), anchor_words(inquiry)
    cands = set(capitalized_spans(background, 2)) | set(capitalized_spans(inquiry, 2))
    for span in quoted_spans(background) + quoted_spans(inquiry):
        ws = anchor_words(span)
        if ws:
            cands.add(" ".join(ws))
    cands |= shared_word_runs(bw, iw, 3)
    return sorted(
        c
        for c in cands
        if c.split() and contains_seq(bw, c.split()) and contains_seq(iw, c.split())
    )


def contains_anchor(text: str, anchor: str) -> bool:
    return contains_seq(anchor_words(text), anchor.split())


def words_lower(s: str):
    return [strip_edges(t).lower() for t in s.split() if strip_edges(t)]


def background_is_clean(background: str, options) -> bool:
    bw = words_lower(background)
    for label, text in options:
        for line in background.splitlines():
            ls = line.strip()
            if ls.startswith(label) and len(ls) > len(label) and ls[len(label)] in ".):":
                return False
        if contains_seq(bw, words_lower(text)):
            return False
    return True


# ---------------------------------------------------------------------------
# The twenty seed questions.
#
# behavior:
#   correct        scored right on every variant
#   wrong_long     right on short/expanded, wrong whenever distractors present
#   wrong_all      wrong on every variant
#   no_extract     reply never states the answer phrase (extraction failure)
#   steps_reject   judged a one-step question and filtered out
#   decompose_retry  first decomposition sample self-judged No, second passes
#   expand_reject  every expansion sample fails self-verification

SEEDS = [
    dict(
        id="maple-creek-observatory",
        entity="Maple Creek Observatory",
        category="math_word_problem",
        behavior="wrong_long",
        stem=(
            "The volunteer program at Maple Creek Observatory runs telescope sessions on 4 "
            "nights each week. Every session night the volunteers set out 3 telescopes, and "
            "each telescope serves 6 visitors over the evening. How many visitors can the "
            "program serve in one week?"
        ),
        options=[("A", "56"), ("B", "64"), ("C", "72"), ("D", "80")],
        answer="C",
        rationale=(
            "The program runs 4 nights with 3 telescopes each, giving 4 x 3 = 12 telescope "
            "evenings per week. Each telescope evening serves 6 visitors, so the weekly "
            "capacity is 12 x 6 = 72 visitors."
        ),
        steps=2,
        step_note=(
            "First multiply nights by telescopes to get telescope evenings, then multiply by "
            "visitors per telescope. Two distinct calculations."
        ),
        background=(
            "The volunteer program at Maple Creek Observatory runs telescope sessions on 4 "
            "nights each week. Every session night the volunteers set out 3 telescopes along "
            "the ridge terrace, and each telescope serves 6 visitors over the course of the "
            "evening."
        ),
        inquiry_q=(
            "How many visitors can the volunteer program at Maple Creek Observatory serve in "
            "one week?"
        ),
        passages=[
            (
                "Maple Creek Observatory crowns a wooded ridge east of the river, and its "
                "volunteer program has become a fixture of the town calendar. Telescope "
                "sessions run on 4 nights each week, a rhythm the coordinators have kept "
                "through every season. Visitors arrive before dusk, sign the logbook, and "
                "wait for the domes to open. That steady weekly schedule is the starting "
                "point for working out how many people the program can host."
            ),
            (
                "On every session night at Maple Creek Observatory, volunteers set out 3 "
                "telescopes along the ridge terrace. The arrangement never varies: one "
                "instrument near the warming hut, one at the rail, and one beside the old "
                "dome. Guides like to say the fixed count of instruments each night matters "
                "to anyone tallying the program's full capacity."
            ),
            (
                "Each telescope at Maple Creek Observatory serves 6 visitors over the course "
                "of an evening, with short guided turns at the eyepiece. Stewards keep the "
                "groups small so everyone gets unhurried viewing time. That per-telescope "
                "figure is the last piece needed to reckon the total number of visitors "
                "served across a week."
            ),
        ],
        recap=(
            "sessions run 4 nights a week, each night sets out 3 telescopes, and each "
            "telescope serves 6 visitors, so the weekly capacity is 4 x 3 x 6 = 72."
        ),
        wrong_label="B",
        wrong_recap=(
            "only the 4 nights and the 3 telescopes could be confirmed among the clutter, "
            "and spreading those across the week suggests a capacity of 64."
        ),
    ),
    dict(
        id="harrowgate-tram-depot",
        entity="Harrowgate Tram Depot",
        category="math_word_problem",
        behavior="steps_reject",
        stem=(
            "The morning shift at Harrowgate Tram Depot washes 9 trams and the evening shift "
            "washes 7 more. How many trams do the two shifts wash in all?"
        ),
        options=[("A", "14"), ("B", "15"), ("C", "16"), ("D", "18")],
        answer="C",
        rationale="Add the two shifts: 9 + 7 = 16 trams washed in all.",
        steps=1,
        step_note=(
            "The solution is a single addition of the two shift counts; nothing else is "
            "inferred."
        ),
    ),
    dict(
        id="silverpine-relay-station",
        entity="Silverpine Relay Station",
        category="logical_inference",
        behavior="decompose_retry",
        stem=(
            "Three operators named Ada, Bram, and Cole staff Silverpine Relay Station on "
            "weekdays. Ada never works the night watch. Bram takes a shift only when Cole is "
            "off duty. On Thursday night, Cole was on duty. Who staffed the Thursday night "
            "watch at Silverpine Relay Station?"
        ),
        options=[
            ("A", "Ada alone"),
            ("B", "Bram alone"),
            ("C", "Cole alone"),
            ("D", "nobody at all"),
        ],
        answer="C",
        rationale=(
            "Ada never works nights, so Ada is out. Cole was on duty, and Bram works only "
            "when Cole is off, so Bram is out. That leaves Cole, whom the ledger already "
            "places on duty."
        ),
        steps=3,
        step_note=(
            "Three eliminations in sequence: rule out Ada by the night rule, rule out Bram "
            "by the pairing rule, and confirm Cole from the ledger."
        ),
        background=(
            "Three operators named Ada, Bram, and Cole staff Silverpine Relay Station on "
            "weekdays. Ada never works the night watch. Bram takes a shift only when Cole is "
            "off duty. On Thursday night, Cole was on duty at the relay."
        ),
        inquiry_q="Who staffed the Thursday night watch at Silverpine Relay Station?",
        passages=[
            (
                "Silverpine Relay Station keeps a small weekday crew, and the roster rules "
                "are posted beside the key rack. Three operators named Ada, Bram, and Cole "
                "split the shifts between them. One standing rule never bends: Ada never "
                "works the night watch, whatever the season. Anyone sorting out who covered "
                "a given night at the relay can strike one name from the list straight away."
            ),
            (
                "A second rule governs staffing at Silverpine Relay Station. Bram takes a "
                "shift only when Cole is off duty, a habit left over from the years when the "
                "two shared a single telegraph key. The pairing rule matters to anyone "
                "reconstructing the duty roster for a particular night at the relay."
            ),
            (
                "The duty ledger at Silverpine Relay Station records that on Thursday night "
                "Cole was on duty, initialed in the margin as always. Regular readers of the "
                "ledger know the entry style well. That single dated line settles most "
                "disputes about who kept the night watch that week."
            ),
        ],
        recap=(
            "Ada never takes the night watch, and Bram works only when Cole is off duty; "
            "Cole was on duty Thursday night, so Ada and Bram are both excluded and Cole "
            "alone kept the watch."
        ),
    ),
    dict(
        id="coral-basin-aquarium",
        entity="Coral Basin Aquarium",
        category="reading_comprehension",
        behavior="wrong_long",
        stem=(
            "A plaque at Coral Basin Aquarium says the kelp tank is cleaned before the sea "
            "otter feeding, the otter feeding always happens at noon, and the ray touch pool "
            "closes right when the kelp tank cleaning begins. According to the plaque, which "
            "activity happens last?"
        ),
        options=[
            ("A", "cleaning the kelp tank"),
            ("B", "feeding the sea otters"),
            ("C", "closing the ray touch pool"),
            ("D", "opening the front gates"),
        ],
        answer="B",
        rationale=(
            "The cleaning comes before the feeding, and the touch pool closes the moment the "
            "cleaning begins, so the pool closing cannot be last. The feeding at noon follows "
            "the cleaning, so feeding the otters is the last activity."
        ),
        steps=3,
        step_note=(
            "Order the cleaning before the feeding, tie the pool closing to the start of the "
            "cleaning, then conclude the feeding ends the sequence. Three orderings."
        ),
        background=(
            "A plaque at Coral Basin Aquarium lays out the morning routine. The kelp tank is "
            "cleaned before the sea otter feeding, and the otter feeding always happens at "
            "noon. The ray touch pool closes right when the kelp tank cleaning begins."
        ),
        inquiry_q=(
            "According to the morning plaque at Coral Basin Aquarium, which activity happens "
            "last?"
        ),
        passages=[
            (
                "Coral Basin Aquarium posts a painted plaque beside the entry ramp, walking "
                "visitors through the morning routine hour by hour. The plaque states that "
                "the kelp tank is cleaned before the sea otter feeding, a sequence the "
                "keepers have held to for years. Guests who want to reconstruct the whole "
                "morning order usually start from that line."
            ),
            (
                "The otter feeding at Coral Basin Aquarium always happens at noon, rain or "
                "shine, according to the same entry plaque. Keepers wheel the fish cart out "
                "as the bell sounds twelve. Anyone placing the morning activities in order "
                "can treat the noon feeding as a fixed point on the clock."
            ),
            (
                "One more line on the plaque at Coral Basin Aquarium concerns the ray touch "
                "pool. The touch pool closes right when the kelp tank cleaning begins, so "
                "the two changes happen together. Visitors comparing the morning activities "
                "often overlook that the pool closing is tied to the start of the cleaning, "
                "not to the feeding."
            ),
        ],
        recap=(
            "the cleaning precedes the noon feeding, and the touch pool closes as the "
            "cleaning starts, so both are done before the otters eat; the feeding is last."
        ),
        wrong_label="C",
        wrong_recap=(
            "the scattered lines read as if the pool shuts after the feeding wraps up, so "
            "the closing comes last."
        ),
    ),
    dict(
        id="thornfield-seed-vault",
        entity="Thornfield Seed Vault",
        category="math_word_problem",
        behavior="expand_reject",
        stem=(
            "Thornfield Seed Vault stores sample envelopes in numbered drawers. Each drawer "
            "holds 12 envelopes, each cabinet holds 5 drawers, and the vault room holds 4 "
            "cabinets. How many sample envelopes fit in the vault room?"
        ),
        options=[("A", "200"), ("B", "220"), ("C", "240"), ("D", "260")],
        answer="C",
        rationale=(
            "Each cabinet holds 5 drawers of 12 envelopes, which is 60 envelopes per "
            "cabinet. Four cabinets give 4 x 60 = 240 envelopes."
        ),
        steps=2,
        step_note=(
            "Multiply envelopes per drawer by drawers per cabinet, then by the cabinet "
            "count. Two multiplications."
        ),
        background=(
            "Thornfield Seed Vault stores sample envelopes in numbered drawers. Each drawer "
            "holds 12 envelopes, each cabinet holds 5 drawers, and the vault room holds 4 "
            "cabinets."
        ),
        inquiry_q=(
            "How many sample envelopes fit in the vault room at Thornfield Seed Vault?"
        ),
        passages=[
            (
                "Thornfield Seed Vault catalogs its collection in numbered drawers, and each "
                "drawer holds 12 sample envelopes pressed flat between felt sheets. Curators "
                "rotate the envelopes seasonally to keep the seals sound. The per-drawer "
                "count is the first figure anyone needs when reckoning the room's full "
                "capacity."
            ),
            (
                "Cabinets at Thornfield Seed Vault are built to a single pattern: each "
                "cabinet holds 5 drawers, no more, with brass runners and a humidity card in "
                "the top slot. Joiners copy the pattern exactly when a cabinet is replaced. "
                "The drawers-per-cabinet figure sits at the middle of any capacity "
                "calculation for the vault."
            ),
            (
                "The vault room at Thornfield Seed Vault holds 4 cabinets, set back to back "
                "under the skylight. Nothing else in the room stores seed. Counting the "
                "cabinets is the last step before totaling how many envelopes the room can "
                "keep."
            ),
        ],
        recap="",
    ),
    dict(
        id="larkspur-printing-house",
        entity="Larkspur Printing House",
        category="reading_comprehension",
        behavior="correct",
        stem=(
            "A notice from Larkspur Printing House says the letterpress workshop moved from "
            "the basement up to the loft after the flood, while the bindery stayed where it "
            "always was at street level. Where does the letterpress workshop operate now?"
        ),
        options=[("A", "in the loft"), ("B", "in the basement"), ("C", "on the ground floor")],
        answer="A",
        rationale=(
            "The notice says the workshop moved from the basement to the loft after the "
            "flood, so the workshop now operates in the loft."
        ),
        steps=2,
        step_note=(
            "Locate the relocation statement, then map the destination onto the offered "
            "places. Two steps."
        ),
        background=(
            "A notice from Larkspur Printing House explains the moves made after the flood. "
            "The letterpress workshop moved from the basement up to the loft, while the "
            "bindery stayed where it always was at street level."
        ),
        inquiry_q=(
            "According to the notice from Larkspur Printing House, where does the "
            "letterpress workshop operate now?"
        ),
        passages=[
            (
                "Larkspur Printing House circulated a notice after the flood, and most of it "
                "concerns the letterpress workshop. The workshop moved from the basement up "
                "to the loft, presses and type cases hauled one flight at a time. Readers "
                "tracing where each operation now lives usually begin with that line."
            ),
            (
                "The bindery at Larkspur Printing House stayed where it always was, at "
                "street level, according to the same notice. Folding benches and sewing "
                "frames never left their bays. The unchanged bindery is a useful landmark "
                "when sorting out which rooms the flood actually rearranged."
            ),
            (
                "Staff at Larkspur Printing House say the loft had stood half empty for a "
                "decade before the flood forced the change. Now the letterpress workshop "
                "runs there through the afternoon, daylight falling across the stone "
                "imposing table. Anyone asking after the workshop's current home is pointed "
                "up the stairs."
            ),
        ],
        recap=(
            "the notice places the letterpress workshop in the loft after the flood, with "
            "the bindery unchanged at street level."
        ),
    ),
    dict(
        id="gullwing-ferry-line",
        entity="Gullwing Ferry Line",
        category="math_word_problem",
        behavior="correct",
        stem=(
            "Gullwing Ferry Line runs 5 crossings each morning and 3 more each afternoon. "
            "Every crossing carries 40 passengers. How many passengers can the daily "
            "crossings carry in total?"
        ),
        options=[("A", "280"), ("B", "300"), ("C", "320"), ("D", "360")],
        answer="C",
        rationale=(
            "The line makes 5 + 3 = 8 crossings a day. At 40 passengers each, the day's "
            "capacity is 8 x 40 = 320 passengers."
        ),
        steps=2,
        step_note="Add the two crossing counts, then multiply by passengers per crossing.",
        background=(
            "Gullwing Ferry Line runs 5 crossings each morning and 3 more each afternoon. "
            "Every crossing carries 40 passengers across the strait."
        ),
        inquiry_q=(
            "How many passengers can the daily crossings of Gullwing Ferry Line carry in "
            "total?"
        ),
        passages=[
            (
                "Gullwing Ferry Line keeps a strict morning card: 5 crossings before the "
                "lunch bell, every day of the week. Deckhands chalk each departure on the "
                "wheelhouse board as it leaves. The morning count anchors any tally of how "
                "many passengers the line can move in a day."
            ),
            (
                "Afternoons are quieter for Gullwing Ferry Line, with 3 more crossings after "
                "the lunch bell and the last one timed to the cannery shift. Regulars know "
                "the reduced afternoon card by heart. Adding those sailings to the morning's "
                "is the second step in reckoning the line's daily capacity."
            ),
            (
                "Every crossing run by Gullwing Ferry Line carries 40 passengers, the limit "
                "stamped on the certificate by the harbor board. Crews count heads at the "
                "gangway and hold the line at that number. The per-crossing figure converts "
                "the day's sailings into the total number of travelers served."
            ),
        ],
        recap=(
            "5 morning and 3 afternoon crossings make 8, and at 40 passengers each the "
            "day's capacity is 8 x 40 = 320."
        ),
    ),
    dict(
        id="ashdown-radio-club",
        entity="Ashdown Radio Club",
        category="logical_inference",
        behavior="no_extract",
        stem=(
            "At Ashdown Radio Club, every licensed member owns a transceiver. Rhea belongs "
            "to the club but owns no transceiver at all. What follows about Rhea?"
        ),
        options=[
            ("A", "Rhea is not licensed"),
            ("B", "Rhea is licensed"),
            ("C", "Rhea owns two radios"),
            ("D", "nothing can be concluded"),
        ],
        answer="A",
        rationale=(
            "Every licensed member owns a transceiver, so a member with no transceiver "
            "cannot be licensed. Rhea owns none, so Rhea is not licensed."
        ),
        steps=2,
        step_note=(
            "Take the contrapositive of the ownership rule, then apply it to Rhea. Two "
            "steps."
        ),
        background=(
            "At the weekly meetings of Ashdown Radio Club, one rule of membership is "
            "repeated often: every licensed member owns a transceiver. Rhea belongs to the "
            "club but owns no transceiver at all."
        ),
        inquiry_q="Given the membership rule at Ashdown Radio Club, what follows about Rhea?",
        passages=[
            (
                "Ashdown Radio Club opens every meeting by reading the membership rule "
                "aloud: every licensed member owns a transceiver, no exceptions granted. The "
                "rule dates back to the club's founding charter. Anyone reasoning about a "
                "particular member's license starts from that single sentence."
            ),
            (
                "Rhea belongs to Ashdown Radio Club and rarely misses a meeting, arriving "
                "early to set out the log sheets. The roster lists Rhea among the regular "
                "members in good standing. Any reasoning about Rhea's standing under the "
                "club rule begins with that roster entry."
            ),
            (
                "Inventory day at Ashdown Radio Club turns up a telling fact: Rhea owns no "
                "transceiver at all, not even the surplus handheld the club once raffled. "
                "Members tease Rhea about borrowing the demonstration set. The missing "
                "transceiver is the detail that completes the picture under the membership "
                "rule."
            ),
        ],
        recap="",
    ),
    dict(
        id="pemberton-glass-works",
        entity="Pemberton Glass Works",
        category="reading_comprehension",
        behavior="wrong_long",
        stem=(
            "The visitor guide for Pemberton Glass Works says the demonstration held in the "
            "furnace hall replaced the talk on engraving in the spring program, while a walk "
            "through the gallery still closes each visit. What remains the final item of a "
            "spring visit?"
        ),
        options=[
            ("A", "the engraving talk"),
            ("B", "the furnace hall demonstration"),
            ("C", "the gallery tour"),
            ("D", "the gift counter stop"),
        ],
        answer="C",
        rationale=(
            "The demonstration replaced the talk, so the talk no longer appears at all. The "
            "closing item is unchanged: the guide says a walk through the gallery ends each "
            "visit, which is the gallery tour."
        ),
        steps=2,
        step_note=(
            "Register the substitution in the program, then read off the unchanged closing "
            "item."
        ),
        background=(
            "The visitor guide for Pemberton Glass Works lists the spring changes. The "
            "demonstration held in the furnace hall replaced the talk on engraving in the "
            "spring program, while a walk through the gallery still closes each visit."
        ),
        inquiry_q=(
            "According to the visitor guide for Pemberton Glass Works, what remains the "
            "final item of a spring visit?"
        ),
        passages=[
            (
                "Pemberton Glass Works prints a visitor guide each season, and the spring "
                "edition lists the schedule changes plainly. The demonstration held in the "
                "furnace hall replaced the talk on engraving in the spring program. Visitors "
                "comparing the seasons lean on that line first."
            ),
            (
                "The gallery at Pemberton Glass Works holds pieces from two centuries of the "
                "works' output, goblets to lighthouse lenses. The guide notes that a walk "
                "through the gallery still closes each visit, spring included. That "
                "unchanged closing entry matters when ordering the items of a spring visit."
            ),
            (
                "Regulars at Pemberton Glass Works say the spring program feels different "
                "this year, with the furnace hall roaring where the engraving bench once "
                "drew the crowd. The guide's spring page confirms the swap without listing "
                "times. What ends the visit, though, did not move, as every docent will "
                "mention."
            ),
        ],
        recap=(
            "the demonstration replaced the engraving talk, and the closing item is "
            "untouched: the walk through the gallery, the gallery tour, ends each spring "
            "visit."
        ),
        wrong_label="B",
        wrong_recap=(
            "fragments of the guide surface between unrelated entries, and the furnace hall "
            "demonstration reads as the closing item of the visit."
        ),
    ),
    dict(
        id="foxglove-hill-apiary",
        entity="Foxglove Hill Apiary",
        category="math_word_problem",
        behavior="correct",
        stem=(
            "Foxglove Hill Apiary harvests 8 frames from each hive, and each frame yields 2 "
            "jars of honey. The apiary keeps 14 hives. How many jars does a full harvest "
            "yield?"
        ),
        options=[("A", "196"), ("B", "224"), ("C", "252")],
        answer="B",
        rationale=(
            "Each hive gives 8 frames and each frame gives 2 jars, so one hive yields 16 "
            "jars. Across 14 hives the harvest is 14 x 16 = 224 jars."
        ),
        steps=2,
        step_note="Jars per hive first, then scale by the hive count. Two multiplications.",
        background=(
            "Foxglove Hill Apiary harvests 8 frames from each hive at the close of summer. "
            "Each frame yields 2 jars of honey once spun. The apiary keeps 14 hives along "
            "the fence line."
        ),
        inquiry_q="How many jars of honey does a full harvest at Foxglove Hill Apiary yield?",
        passages=[
            (
                "Foxglove Hill Apiary works to an old rhythm at the close of summer, pulling "
                "8 frames from each hive and no more. The bees keep the rest against the "
                "cold. That per-hive frame count is the first number in any reckoning of the "
                "harvest's size."
            ),
            (
                "The spinning shed at Foxglove Hill Apiary turns each frame into 2 jars of "
                "honey, filtered once through cloth and lidded the same afternoon. The yield "
                "holds steady year to year. Anyone totaling the harvest multiplies by that "
                "two-jars-a-frame figure."
            ),
            (
                "Along the fence line, Foxglove Hill Apiary keeps 14 hives, painted in "
                "fading blues and greens. A few stand empty in hard winters, but all were "
                "full this year. The hive count is the last factor in working out the "
                "season's full yield in jars."
            ),
        ],
        recap=(
            "8 frames per hive times 2 jars per frame gives 16 jars a hive, and 14 hives "
            "make 14 x 16 = 224 jars."
        ),
    ),
    dict(
        id="quarry-lane-bakery",
        entity="Quarry Lane Bakery",
        category="math_word_problem",
        behavior="wrong_all",
        stem=(
            "Quarry Lane Bakery bakes 15 trays of rolls before noon and 9 trays after. Each "
            "tray holds 12 rolls. How many rolls does the bakery bake across a full day?"
        ),
        options=[("A", "264"), ("B", "276"), ("C", "288"), ("D", "300")],
        answer="C",
        rationale=(
            "The day's trays come to 15 + 9 = 24. Each tray holds 12 rolls, so the bakery "
            "bakes 24 x 12 = 288 rolls."
        ),
        steps=2,
        step_note="Add the tray counts, then multiply by rolls per tray.",
        background=(
            "Quarry Lane Bakery bakes 15 trays of rolls before noon and 9 trays after. Each "
            "tray holds 12 rolls, morning and afternoon alike."
        ),
        inquiry_q="How many rolls does Quarry Lane Bakery bake across a full day?",
        passages=[
            (
                "Quarry Lane Bakery fires its deck oven before dawn and sends out 15 trays "
                "of rolls before noon. The morning count never changes on weekdays. That "
                "before-noon figure opens any tally of the day's full baking."
            ),
            (
                "After noon, Quarry Lane Bakery slows but does not stop, baking 9 more trays "
                "for the evening trade. The afternoon trays cool on the same long racks. "
                "Adding them to the morning's output is the middle step in counting the "
                "day's rolls."
            ),
            (
                "Every tray at Quarry Lane Bakery holds 12 rolls, a dozen to the tray "
                "whatever the hour. The tins were cut to that pattern decades ago and never "
                "changed. The per-tray dozen converts the day's tray count into the total "
                "number of rolls."
            ),
        ],
        recap="",
        wrong_label="A",
        wrong_recap=(
            "the trays run 15 and 9 for 24 in all, and at 11 rolls to the tray the day "
            "comes to 264."
        ),
    ),
    dict(
        id="bluewater-canning-cooperative",
        entity="Bluewater Canning Cooperative",
        category="reading_comprehension",
        behavior="correct",
        stem=(
            "A bulletin from Bluewater Canning Cooperative says the fish line runs only on "
            "days when the ice house is stocked, and the ice house receives stock solely on "
            "weekdays. On which days can the fish line run?"
        ),
        options=[
            ("A", "only on weekdays"),
            ("B", "only on weekends"),
            ("C", "every day"),
            ("D", "only in summer"),
        ],
        answer="A",
        rationale=(
            "The line needs a stocked ice house, and stocking happens solely on weekdays, so "
            "the line can run only on weekdays."
        ),
        steps=2,
        step_note="Chain the two conditions: line needs ice, ice arrives on weekdays.",
        background=(
            "A bulletin from Bluewater Canning Cooperative sets out the scheduling rule. The "
            "fish line runs only on days when the ice house is stocked, and the ice house "
            "receives stock solely on weekdays."
        ),
        inquiry_q=(
            "Under the bulletin rule at Bluewater Canning Cooperative, on which days can the "
            "fish line run?"
        ),
        passages=[
            (
                "Bluewater Canning Cooperative pins its bulletins by the weigh station, and "
                "the standing one concerns the fish line. The fish line runs only on days "
                "when the ice house is stocked. Crews read that dependency first when "
                "working out the line's possible days."
            ),
            (
                "The ice house at Bluewater Canning Cooperative receives stock solely on "
                "weekdays, carted up from the harbor before the morning whistle. Weekend "
                "deliveries were dropped years ago. That stocking pattern is the second fact "
                "needed to pin down when the line can operate."
            ),
            (
                "Old hands at Bluewater Canning Cooperative treat the two rules as one "
                "chain: no stocked ice means no fish line, and ice arrives only while the "
                "week's carts run. Visitors asking when the line operates are shown the "
                "chain spelled out on the bulletin itself."
            ),
        ],
        recap=(
            "the line requires a stocked ice house and stocking happens solely on weekdays, "
            "so the line runs only on weekdays."
        ),
    ),
    dict(
        id="redstone-valley-chorus",
        entity="Redstone Valley Chorus",
        category="logical_inference",
        behavior="wrong_all",
        stem=(
            "Redstone Valley Chorus rehearses only when the hall is free and the director is "
            "in town. The hall is free on Mondays and on Thursdays. The director is away "
            "every Thursday. On which night can the chorus rehearse?"
        ),
        options=[
            ("A", "on a Thursday"),
            ("B", "on a Monday"),
            ("C", "on a Friday"),
            ("D", "on a Sunday"),
        ],
        answer="B",
        rationale=(
            "Rehearsal needs a free hall and the director present. The hall is free Mondays "
            "and Thursdays, but the director is away every Thursday, so Thursday fails. "
            "Monday satisfies both conditions."
        ),
        steps=3,
        step_note=(
            "List the free nights, eliminate Thursday by the director's absence, and "
            "confirm Monday meets both conditions."
        ),
        background=(
            "Redstone Valley Chorus rehearses on a night only when the hall is free and the "
            "director is in town. The hall is free on Mondays and on Thursdays. The director "
            "is away every Thursday without fail."
        ),
        inquiry_q="On which night can the members of Redstone Valley Chorus rehearse?",
        passages=[
            (
                "Redstone Valley Chorus holds to one scheduling rule: rehearsal happens only "
                "when the hall is free and the director is in town, both at once. Neither "
                "condition alone will do. Members testing a candidate night check the two "
                "conditions in turn."
            ),
            (
                "The hall used by Redstone Valley Chorus is free on Mondays and on "
                "Thursdays, and booked solid the rest of the week by the weaving circle and "
                "the scouts. The caretaker chalks the open nights on the door. Those two "
                "free nights are where any rehearsal plan must start."
            ),
            (
                "The director of Redstone Valley Chorus is away every Thursday without "
                "fail, riding the late coach to tutor in the next county. The chorus has "
                "learned not to plan around a Thursday return. That standing absence knocks "
                "one otherwise free night off the list."
            ),
        ],
        recap="",
        wrong_label="D",
        wrong_recap=(
            "the hall reads as free on the quiet seventh night and the director keeps no "
            "engagements then, so the chorus can gather at the week's end."
        ),
    ),
    dict(
        id="millbrook-weather-bureau",
        entity="Millbrook Weather Bureau",
        category="logical_inference",
        behavior="wrong_long",
        stem=(
            "Millbrook Weather Bureau raises the storm flag whenever the barometer falls "
            "below the red line, with no exceptions. This afternoon the storm flag is not "
            "flying. What can be concluded?"
        ),
        options=[
            ("A", "the barometer fell below the red line"),
            ("B", "the barometer did not fall below the red line"),
            ("C", "the flag halyard broke"),
            ("D", "a storm is certain"),
        ],
        answer="B",
        rationale=(
            "If the barometer had fallen below the red line, the flag would be flying. The "
            "flag is not flying, so the barometer did not fall below the red line."
        ),
        steps=2,
        step_note="State the rule's contrapositive, then apply the observed bare pole.",
        background=(
            "Millbrook Weather Bureau raises the storm flag whenever the barometer falls "
            "below the red line. The rule admits no exceptions. This afternoon the storm "
            "flag is not flying above the bureau."
        ),
        inquiry_q=(
            "What can be concluded from the flag rule at Millbrook Weather Bureau this "
            "afternoon?"
        ),
        passages=[
            (
                "Millbrook Weather Bureau follows a single flag rule: the storm flag goes up "
                "whenever the barometer falls below the red line. Clerks drill the habit "
                "until it is automatic. Reasoning backward from the flag pole starts with "
                "that unconditional rule."
            ),
            (
                "Veterans at Millbrook Weather Bureau like to say the rule admits no "
                "exceptions, not during festivals and not during power cuts. The flag locker "
                "is never locked for exactly that reason. The absence of exceptions is what "
                "makes conclusions drawn from the flag's state trustworthy."
            ),
            (
                "This afternoon the storm flag is not flying above Millbrook Weather Bureau, "
                "the pole bare against a gray sky. Passersby noted the empty halyard on "
                "their way to the market. That observed bare pole is the final premise for "
                "anyone applying the bureau's flag rule."
            ),
        ],
        recap=(
            "the rule puts the flag up whenever the barometer drops below the red line; the "
            "flag is absent, so the barometer did not fall below the line."
        ),
        wrong_label="A",
        wrong_recap=(
            "with survey chatter crowding the notes, the bare pole reads as the lull after "
            "a drop, so the barometer fell below the red line."
        ),
    ),
    dict(
        id="opal-street-cinema",
        entity="Opal Street Cinema",
        category="reading_comprehension",
        behavior="correct",
        stem=(
            "The program card at Opal Street Cinema says a matinee always precedes the "
            "interlude played on the house organ, and a newsreel screens immediately after "
            "that interlude. Which item opens the afternoon program?"
        ),
        options=[
            ("A", "the newsreel"),
            ("B", "the organ interlude"),
            ("C", "the matinee"),
            ("D", "the ticket raffle"),
        ],
        answer="C",
        rationale=(
            "The matinee precedes the interlude, and the newsreel follows the interlude, so "
            "the order is matinee, interlude, newsreel. The matinee opens the afternoon."
        ),
        steps=2,
        step_note="Chain the two orderings, then read off the earliest item.",
        background=(
            "The program card at Opal Street Cinema sets the afternoon order. A matinee "
            "always precedes the interlude played on the house organ, and a newsreel "
            "screens immediately after that interlude."
        ),
        inquiry_q="Which item opens the afternoon program at Opal Street Cinema?",
        passages=[
            (
                "Opal Street Cinema prints a small program card for the afternoon, and its "
                "first rule of ordering is fixed: a matinee always precedes the interlude "
                "played on the house organ. Ushers recite it to anyone who asks. Working out "
                "what opens the afternoon begins there."
            ),
            (
                "The house organ at Opal Street Cinema rises on its lift between "
                "screenings, and the card places a newsreel immediately after that "
                "interlude. The reels arrive by train on Tuesdays. Knowing what follows the "
                "organ settles the back half of the afternoon's order."
            ),
            (
                "Regulars at Opal Street Cinema rarely consult the card anymore; the "
                "afternoon shape is muscle memory, three items deep from the first seat "
                "creak to the last. Newcomers who want the sequence spelled out are handed "
                "the card with a smile. The opening item is the one most often asked after."
            ),
        ],
        recap=(
            "the order runs matinee, then organ interlude, then newsreel, so the matinee "
            "opens the afternoon."
        ),
    ),
    dict(
        id="hawthorn-bend-nursery",
        entity="Hawthorn Bend Nursery",
        category="math_word_problem",
        behavior="wrong_long",
        stem=(
            "Hawthorn Bend Nursery plants seedlings in beds of 18. This season the crew "
            "filled 7 full beds and had 11 seedlings left over. How many seedlings did the "
            "crew start the season with?"
        ),
        options=[("A", "126"), ("B", "133"), ("C", "137"), ("D", "144")],
        answer="C",
        rationale=(
            "Seven full beds of 18 hold 7 x 18 = 126 seedlings. Adding the 11 left over "
            "gives 126 + 11 = 137 seedlings at the start."
        ),
        steps=2,
        step_note="Multiply beds by bed size, then add the leftovers.",
        background=(
            "Hawthorn Bend Nursery plants seedlings in beds of 18. This season the crew "
            "filled 7 full beds and had 11 seedlings left over with nowhere to go."
        ),
        inquiry_q=(
            "How many seedlings did the crew at Hawthorn Bend Nursery start the season "
            "with?"
        ),
        passages=[
            (
                "Hawthorn Bend Nursery lays out its seedlings in beds of 18, a spacing the "
                "founder worked out against the frost line. No bed ever takes more. That "
                "per-bed count of eighteen is the first factor in reconstructing the "
                "season's starting stock."
            ),
            (
                "This season the crew at Hawthorn Bend Nursery filled 7 full beds before "
                "running out of prepared ground. The seventh bed went in just ahead of the "
                "rain. The number of filled beds is the multiplier that turns bed size into "
                "planted stock."
            ),
            (
                "When planting ended at Hawthorn Bend Nursery, 11 seedlings were left over "
                "with nowhere to go, heeled into a sand trench by the gate. The crew counts "
                "leftovers carefully each year. Those eleven must be added back to the "
                "planted total to recover the starting count."
            ),
        ],
        recap=(
            "7 beds of 18 hold 7 x 18 = 126, plus the 11 left over gives 137 seedlings to "
            "start."
        ),
        wrong_label="D",
        wrong_recap=(
            "amid the survey notes the beds read as 8 with nothing left over, and 8 beds of "
            "18 give 144."
        ),
    ),
    dict(
        id="crescent-dune-lighthouse",
        entity="Crescent Dune Lighthouse",
        category="logical_inference",
        behavior="correct",
        stem=(
            "The keeper of Crescent Dune Lighthouse lights the lamp only after the harbor "
            "bell rings twice. The log shows the lamp was lit on Saturday evening. What must "
            "have happened first?"
        ),
        options=[
            ("A", "the harbor bell rang twice"),
            ("B", "the fog horn sounded"),
            ("C", "the tide reached its peak"),
            ("D", "the keeper slept through the evening"),
        ],
        answer="A",
        rationale=(
            "The lamp is lit only after the bell rings twice, and the log shows the lamp was "
            "lit, so the bell must have rung twice first."
        ),
        steps=2,
        step_note="Take the only-after rule, then apply the logged lit lamp.",
        background=(
            "The keeper of Crescent Dune Lighthouse lights the lamp only after the harbor "
            "bell rings twice. The log shows the lamp was lit on Saturday evening."
        ),
        inquiry_q=(
            "Given the keeper's rule at Crescent Dune Lighthouse, what must have happened "
            "first on Saturday?"
        ),
        passages=[
            (
                "Crescent Dune Lighthouse runs on one rule above all: the keeper lights the "
                "lamp only after the harbor bell rings twice, never before. The rule "
                "predates the current keeper by a generation. Any inference from a lit lamp "
                "leans on that ordering."
            ),
            (
                "The log at Crescent Dune Lighthouse is kept in pencil, one line a night, "
                "and the Saturday line shows the lamp was lit that evening. Entries are "
                "initialed and never amended afterward. A recorded lit lamp is the firm "
                "fact from which the night's events can be reasoned out."
            ),
            (
                "Visitors to Crescent Dune Lighthouse often ask about the harbor bell, "
                "which hangs a mile off at the pier head and carries easily over the dunes. "
                "Its double ring is the only signal the keeper accepts. Connecting the bell "
                "to the Saturday lamp is the whole trick of reading the log."
            ),
        ],
        recap=(
            "the lamp is lit only after the bell rings twice, and the Saturday lamp was "
            "lit, so the bell rang twice first."
        ),
    ),
    dict(
        id="juniper-flats-rodeo",
        entity="Juniper Flats Rodeo",
        category="reading_comprehension",
        behavior="correct",
        stem=(
            "A handbill for Juniper Flats Rodeo says the barrel races were moved from the "
            "main arena out to the north corral, and the roping finals now occupy that main "
            "arena slot. Where do the barrel races now run?"
        ),
        options=[
            ("A", "in the north corral"),
            ("B", "in the main arena"),
            ("C", "behind the grandstand"),
        ],
        answer="A",
        rationale=(
            "The handbill moves the barrel races to the north corral and gives their old "
            "arena slot to the roping finals, so the races now run in the north corral."
        ),
        steps=2,
        step_note="Find the relocation line, then match the destination to an option.",
        background=(
            "A handbill for Juniper Flats Rodeo lists the grounds changes. The barrel races "
            "were moved from the main arena out to the north corral, and the roping finals "
            "now occupy that main arena slot."
        ),
        inquiry_q=(
            "According to the handbill for Juniper Flats Rodeo, where do the barrel races "
            "now run?"
        ),
        passages=[
            (
                "Juniper Flats Rodeo posted a fresh handbill at the feed store, and the "
                "grounds changes top the sheet. The barrel races were moved from the main "
                "arena out to the north corral this year. Anyone looking for the races "
                "should read that relocation line first."
            ),
            (
                "The main arena at Juniper Flats Rodeo did not go quiet: the roping finals "
                "now occupy the slot the barrel races left behind. Bleachers there fill "
                "early on finals day. Knowing what claimed the arena helps untangle where "
                "each event ended up."
            ),
            (
                "The north corral at Juniper Flats Rodeo was regraded and fenced fresh in "
                "the spring, plainly in anticipation of hosting something bigger. Riders "
                "have been walking the new ground all week. The corral's new tenant is "
                "exactly what the handbill spells out."
            ),
        ],
        recap=(
            "the handbill sends the barrel races to the north corral, with the roping "
            "finals taking over the arena slot."
        ),
    ),
    dict(
        id="saltmarsh-field-laboratory",
        entity="Saltmarsh Field Laboratory",
        category="logical_inference",
        behavior="correct",
        stem=(
            "At Saltmarsh Field Laboratory, each day's samples are logged either by Ines or "
            "by Piet, never by both. The Tuesday log page is not in the handwriting of Ines. "
            "Who logged the Tuesday samples?"
        ),
        options=[
            ("A", "Ines logged them"),
            ("B", "Piet logged them"),
            ("C", "both of them together"),
            ("D", "the log was skipped"),
        ],
        answer="B",
        rationale=(
            "The logger is always exactly one of Ines or Piet. Tuesday's page is not in the "
            "handwriting of Ines, so Piet logged the Tuesday samples."
        ),
        steps=2,
        step_note="Use the exactly-one rule, then eliminate Ines by the handwriting.",
        background=(
            "At Saltmarsh Field Laboratory, each day's samples are logged either by Ines or "
            "by Piet, never by both. The Tuesday log page is not in the handwriting of "
            "Ines."
        ),
        inquiry_q="Who logged the Tuesday samples at Saltmarsh Field Laboratory?",
        passages=[
            (
                "Saltmarsh Field Laboratory keeps a strict logging custom: each day's "
                "samples are logged either by Ines or by Piet, never by both and never by "
                "anyone else. The rule keeps the notebooks consistent. Working out a given "
                "day's logger starts from that either-or."
            ),
            (
                "Handwriting tells the two apart at Saltmarsh Field Laboratory: Ines writes "
                "a narrow upright hand, Piet a looping slant that crowds the margins. Staff "
                "can attribute a page at a glance. The Tuesday page, checked twice, is not "
                "in the handwriting of Ines."
            ),
            (
                "Tide tables pinned above the bench at Saltmarsh Field Laboratory explain "
                "why sampling never pauses midweek, and the log shows no gaps this season. "
                "A complete log means every page has exactly one author. That completeness "
                "rules out any skipped Tuesday."
            ),
        ],
        recap=(
            "exactly one of Ines or Piet logs each day, and the Tuesday page is not in the "
            "hand of Ines, so Piet logged it."
        ),
    ),
    dict(
        id="wrenfield-archery-guild",
        entity="Wrenfield Archery Guild",
        category="reading_comprehension",
        behavior="correct",
        stem=(
            "The yearbook of Wrenfield Archery Guild says the junior league shoots from the "
            "east lawn, the senior league shares the range house with the wardens, and "
            "visiting clubs are sent out to the river meadow. Where does the junior league "
            "shoot?"
        ),
        options=[
            ("A", "on the east lawn"),
            ("B", "in the range house"),
            ("C", "at the river meadow"),
            ("D", "behind the clubhouse"),
            ("E", "on the west lawn"),
        ],
        answer="A",
        rationale=(
            "The yearbook assigns the junior league to the east lawn, so that is where the "
            "juniors shoot."
        ),
        steps=2,
        step_note="Find the junior assignment among the three, then match it to an option.",
        background=(
            "The yearbook of Wrenfield Archery Guild records the grounds assignments. The "
            "junior league shoots from the east lawn, the senior league shares the range "
            "house with the wardens, and visiting clubs are sent out to the river meadow."
        ),
        inquiry_q=(
            "According to the yearbook of Wrenfield Archery Guild, where does the junior "
            "league shoot?"
        ),
        passages=[
            (
                "Wrenfield Archery Guild prints a slim yearbook each winter, and the grounds "
                "assignments page settles most arguments. The junior league shoots from the "
                "east lawn, rain or shine. Anyone placing the juniors on a map of the "
                "grounds needs only that line."
            ),
            (
                "The senior league at Wrenfield Archery Guild shares the range house with "
                "the wardens, an arrangement dating to the old lease. Targets store under "
                "the eaves there through the winter. Knowing the seniors' indoor berth "
                "helps keep the other assignments straight."
            ),
            (
                "Visiting clubs that call on Wrenfield Archery Guild are sent out to the "
                "river meadow, where portable butts stand from May onward. Hosts walk their "
                "guests down after tea. The meadow assignment rounds out the yearbook's map "
                "of who shoots where."
            ),
        ],
        recap="the yearbook puts the junior league on the east lawn.",
    ),
]

# ---------------------------------------------------------------------------
# Mock response builders

STEP_MARKER = "Count how many distinct reasoning steps"
DECOMPOSE_MARKER = "Please break down the question below"
EXPAND_MARKER = "expand the above material"
VERIFY_MARKER = "compare the expanded material"
REWRITE_MARKER = "Rewrite the passage above"


def options_block(options):
    return "\n".join(f"{label}. {text}" for label, text in options)


def step_response(seed):
    return (
        "### Analysis\n"
        f"{seed['step_note']}\n"
        "### Step Count\n"
        f"{seed['steps']}"
    )


def decompose_response(seed, good=True):
    entity = seed["entity"]
    inquiry = seed["inquiry_q"] + "\n" + options_block(seed["options"])
    if good:
        analysis = (
            f"The name {entity} appears in the original stem and is distinctive enough to "
            "serve as the retrieval signal, so the background keeps every fact while the "
            "options stay out of it."
        )
        signal_note = (
            f"The name {entity} is carried by the rewritten inquiry, so the related "
            "passage can be recovered even when it is buried among unrelated materials."
        )
        verdict1 = "Yes"
    else:
        analysis = (
            "The draft below leans on generic roster wording rather than a distinctive "
            "name, so the passage could not be recovered reliably from a large pile of "
            "materials."
        )
        signal_note = (
            "The rewritten inquiry does not carry a strong enough signal to single out the "
            "background passage among other materials."
        )
        verdict1 = "No"
    return (
        "### Analysis\n"
        f"{analysis}\n\n"
        "### Broken Down Question\n"
        "#### Background Passage\n"
        f"{seed['background']}\n"
        "#### Question About the Background Passage\n"
        f"{inquiry}\n\n"
        "### Analysis of the Question About the Background Passage\n"
        f"{signal_note}\n\n"
        "### Judge Whether the Question About the Background Passage Meets the Requirements\n"
        f"{verdict1}\n\n"
        "### Analyze Whether the Broken Down Question Matches the Original Question in Meaning\n"
        "The background keeps every original fact and the rewritten inquiry asks for the "
        "same decision over the same options, so the meaning is unchanged.\n\n"
        "### Judge Whether the Broken Down Question Matches the Original Question in Meaning\n"
        "Yes"
    )


def expand_response(seed):
    entity = seed["entity"]
    numbered = "\n".join(f"{i + 1}. {p}" for i, p in enumerate(seed["passages"]))
    return (
        "### Analysis\n"
        f"The material about {entity} separates into {len(seed['passages'])} independent "
        f"facts, so the expanded material uses {len(seed['passages'])} paragraphs, each "
        f"naming {entity} with its fact placed mid-paragraph.\n"
        "### Expanded material\n"
        f"{numbered}"
    )


def verify_response(seed, good=True):
    entity = seed["entity"]
    if good:
        analysis = (
            f"Each paragraph restates exactly one fact from the original material about "
            f"{entity}; no paragraph adds knowledge that bears on the decision, and every "
            f"paragraph names {entity}."
        )
        affecting = "No"
    else:
        analysis = (
            "The final paragraph comes close to totaling the collection outright, and that "
            "figure would hand over the conclusion; the addition bears directly on the "
            "outcome."
        )
        affecting = "Yes"
    return (
        "### Analysis\n"
        f"{analysis}\n"
        "### Does the expanded material contain all the key information from the original "
        "material based on the analysis?\n"
        "Yes\n"
        "### Does the expanded material contain information that will affect the answer to "
        "the question based on the analysis?\n"
        f"{affecting}\n"
        "### Are all the paragraphs in the expanded material are related to the main "
        "topic/character of the question based on the analysis?\n"
        "Yes"
    )


def eval_correct(seed):
    return (
        f"Scanning the material for {seed['entity']}: {seed['recap']}\n"
        f"The answer is {seed['answer']}"
    )


def eval_wrong(seed):
    return (
        f"Most of the material is unrelated survey matter; only fragments about "
        f"{seed['entity']} stand out. {seed['wrong_recap']}\n"
        f"The answer is {seed['wrong_label']}"
    )


def eval_no_extract(seed):
    return (
        f"The membership rule at {seed['entity']} pairs licensing with owning a "
        "transceiver, and the notes say Rhea owns none. Option A looks right, though the "
        "concluding line is left off this draft."
    )


# ---------------------------------------------------------------------------
# Distractor corpus: 250 passages about the fictional Meridian survey.

PREFIXES = [
    "Alder", "Bramble", "Brine", "Cinder", "Dray", "Eelgrass", "Fenn", "Gorse",
    "Heron", "Ketter", "Lorn", "Marrow", "Nettle", "Osprey", "Pike", "Quill",
    "Rushe", "Sorrel", "Tarn", "Umber", "Vetch", "Wicker", "Yarrow", "Zephyr",
    "Mallow",
]
SUFFIXES = ["moor", "hollow", "reach", "quay", "fold", "crag", "mead", "wharf", "dell", "rise"]

GOODS = [
    "barley", "flax", "hops", "rye", "salt cod", "wool", "tallow", "osier baskets",
    "dried eels", "beeswax", "peat bricks", "net twine",
]
FEATURES = [
    "mill race", "towpath", "high road", "shingle beach", "terraced slope",
    "old embankment", "carp ponds", "drover's lane",
]
CRAFTS = [
    "rope-walk", "smokehouse", "tannery", "lime kiln", "boatyard", "loom shed",
    "cooperage", "cider press",
]
WEATHERS = [
    "fogs that sit until midmorning",
    "a dry east wind through the spring",
    "sudden squalls off the headland",
    "long mild autumns",
    "frosts that arrive a month early",
    "rains that flood the lower lane most years",
]


def corpus_pair(place, rng):
    """Returns (raw_passage, rewritten_passage) with identical facts."""
    n_stalls = rng.randint(12, 96)
    households = rng.randint(40, 420)
    miles = rng.randint(3, 60)
    good1, good2 = rng.sample(GOODS, 2)
    feature = rng.choice(FEATURES)
    craft = rng.choice(CRAFTS)
    weather = rng.choice(WEATHERS)
    ledger = rng.choice(["survey", "gazetteer", "ledger", "atlas"])

    raw_sentences = [
        f"The Meridian {ledger} gives {place} a longer entry than most, filling the better "
        f"part of a page in the clerks' running hand.",
        f"Traders there keep {n_stalls} covered stalls busy through the season, dealing "
        f"mostly in {good1} and {good2} sold by the basket.",
        f"The warden's census recorded {households} households along the {feature}, a "
        f"count that has barely moved in a decade.",
        f"A {craft} stands at the edge of the settlement, and its noise marks the working "
        f"hours for everyone nearby.",
        f"Travelers reckon the place {miles} miles from the coast road and complain of "
        f"{weather}.",
        "Clerks still argue over which crossing the entry means, but the figures "
        "themselves were checked twice.",
    ]
    rewritten_sentences = [
        f"{place} earns an unusually long entry in the Meridian {ledger}, covering most of "
        f"a page.",
        f"Through the season the market at {place} runs {n_stalls} covered stalls, with "
        f"{good1} and {good2} making up most of the trade.",
        f"According to the warden's census, {households} households live along the "
        f"{feature}, and the count has stayed nearly level for ten years.",
        f"At the settlement's edge a {craft} sets the rhythm of the working day with its "
        f"noise.",
        f"The place lies {miles} miles from the coast road by travelers' reckoning, and "
        f"visitors remark on {weather}.",
        "The figures in the entry were checked twice, though clerks still dispute which "
        "crossing it describes.",
    ]
    return " ".join(raw_sentences), " ".join(rewritten_sentences)


SHORT_STUBS = [
    "Index of the northern sheets, amended in the spring.",
    "Errata slip for the coastal charts of the Meridian atlas.",
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20250819)

    places = [p + s for p in PREFIXES for s in SUFFIXES]
    assert len(places) == len(set(places)) == 250

    corpus = []  # (place, raw, rewritten)
    for place in places:
        raw, rewritten = corpus_pair(place, rng)
        corpus.append((place, raw, rewritten))

    # --- seeds.jsonl
    seed_rows = []
    for s in SEEDS:
        seed_rows.append(
            {
                "id": s["id"],
                "category": s["category"],
                "stem": s["stem"],
                "options": {label: text for label, text in s["options"]},
                "answer": s["answer"],
                "rationale": s["rationale"],
                "source": "handcrafted-demo",
            }
        )

    # --- synth script
    synth_entries = []
    for s in SEEDS:
        synth_entries.append(
            {"match_all": [STEP_MARKER, s["entity"]], "response": step_response(s)}
        )
    for s in SEEDS:
        if s["behavior"] == "steps_reject":
            continue
        if s["behavior"] == "decompose_retry":
            synth_entries.append(
                {
                    "match_all": [DECOMPOSE_MARKER, s["entity"]],
                    "responses": [decompose_response(s, good=False), decompose_response(s)],
                }
            )
        else:
            synth_entries.append(
                {"match_all": [DECOMPOSE_MARKER, s["entity"]], "response": decompose_response(s)}
            )
    for s in SEEDS:
        if s["behavior"] == "steps_reject":
            continue
        synth_entries.append(
            {"match_all": [EXPAND_MARKER, s["entity"]], "response": expand_response(s)}
        )
        synth_entries.append(
            {
                "match_all": [VERIFY_MARKER, s["entity"]],
                "response": verify_response(s, good=(s["behavior"] != "expand_reject")),
            }
        )
    for place, raw, rewritten in corpus:
        synth_entries.append({"match_all": [REWRITE_MARKER, place], "response": rewritten})

    # --- eval script (first match wins: distractor-sensitive entries go first)
    eval_entries = []
    for s in SEEDS:
        if s["behavior"] in ("steps_reject", "expand_reject"):
            continue  # never reaches the scoring stage
        if s["behavior"] == "wrong_long":
            # "Meridian" appears only in distractor passages, so this entry
            # fires exactly when the prompt carries filler material.
            eval_entries.append(
                {"match_all": [s["entity"], "Meridian"], "response": eval_wrong(s)}
            )
            eval_entries.append({"match": s["entity"], "response": eval_correct(s)})
        elif s["behavior"] == "wrong_all":
            eval_entries.append({"match": s["entity"], "response": eval_wrong(s)})
        elif s["behavior"] == "no_extract":
            eval_entries.append({"match": s["entity"], "response": eval_no_extract(s)})
        else:
            eval_entries.append({"match": s["entity"], "response": eval_correct(s)})

    # --- self-checks ------------------------------------------------------
    problems = []
    all_anchors = {}
    for s in SEEDS:
        sid = s["id"]
        if s["entity"] not in s["stem"]:
            problems.append(f"{sid}: entity missing from stem")
        if "Meridian" in json.dumps({k: v for k, v in s.items()}):
            problems.append(f"{sid}: seed content mentions Meridian")
        if s["behavior"] == "steps_reject":
            continue
        inquiry = s["inquiry_q"] + "\n" + options_block(s["options"])
        anchors = extract_anchors(s["background"], inquiry)
        all_anchors[sid] = anchors
        if s["entity"] not in anchors:
            problems.append(f"{sid}: entity is not an anchor: {anchors}")
        if not any(len(a.split()) >= 3 for a in anchors):
            problems.append(f"{sid}: no anchor of 3+ words")
        if not background_is_clean(s["background"], s["options"]):
            problems.append(f"{sid}: background leaks an option")
        norm_inquiry = " ".join(inquiry.split())
        for label, text in s["options"]:
            if " ".join(text.split()) not in norm_inquiry:
                problems.append(f"{sid}: option {label} text missing from inquiry")
        for i, p in enumerate(s["passages"]):
            if not contains_anchor(p, s["entity"]):
                problems.append(f"{sid}: passage {i + 1} lacks the entity anchor")
            if "Meridian" in p:
                problems.append(f"{sid}: passage {i + 1} mentions Meridian")
            if '"' in p or '"' in s["background"]:
                problems.append(f"{sid}: stray double quote")
        if s["behavior"] in ("wrong_long", "wrong_all"):
            if not s.get("wrong_label") or s["wrong_label"] == s["answer"]:
                problems.append(f"{sid}: bad wrong_label")

    entities = [s["entity"] for s in SEEDS]
    if len(set(entities)) != len(entities):
        problems.append("duplicate entities")
    ids = [s["id"] for s in SEEDS]
    if len(set(ids)) != len(ids):
        problems.append("duplicate ids")

    for place, raw, rewritten in corpus:
        for kind, text in (("raw", raw), ("rewritten", rewritten)):
            wc = len(text.split())
            if not 80 <= wc <= 140:
                problems.append(f"{place} {kind}: word count {wc} outside 80..140")
            if "Meridian" not in text:
                problems.append(f"{place} {kind}: missing Meridian")
            low = text.lower()
            for entity in entities:
                if entity.lower() in low:
                    problems.append(f"{place} {kind}: contains entity {entity}")
            for sid, anchors in all_anchors.items():
                for a in anchors:
                    if contains_anchor(text, a):
                        problems.append(f"{place} {kind}: contains anchor '{a}' of {sid}")

    for e in eval_entries:
        resp = e["response"]
        if "concluding line" in resp:
            if "the answer is" in resp.lower():
                problems.append("no_extract response leaks the answer phrase")
        elif not resp.splitlines()[-1].startswith("The answer is "):
            problems.append(f"eval response does not end with the answer phrase: {resp[:60]}")

    if problems:
        for p in problems:
            print("PROBLEM:", p, file=sys.stderr)
        sys.exit(1)

    # --- write files ------------------------------------------------------
    def write_jsonl(path, rows):
        with open(path, "w") as f:
            for row in rows:
                f.write(json.dumps(row, ensure_ascii=False) + "\n")

    write_jsonl(OUT / "seeds.jsonl", seed_rows)
    write_jsonl(OUT / "synth_script.jsonl", synth_entries)
    write_jsonl(OUT / "eval_script.jsonl", eval_entries)

    txt_passages = [raw for _, raw, _ in corpus[:220]]
    txt_passages.insert(40, SHORT_STUBS[0])
    txt_passages.insert(120, SHORT_STUBS[1])
    (OUT / "corpus.txt").write_text("\n\n".join(txt_passages) + "\n")
    write_jsonl(OUT / "corpus_extra.jsonl", [{"text": raw} for _, raw, _ in corpus[220:]])

    n_variants = sum(1 for s in SEEDS if s["behavior"] not in ("steps_reject", "expand_reject"))
    print(f"seeds: {len(seed_rows)}")
    print(f"synth script entries: {len(synth_entries)}")
    print(f"eval script entries: {len(eval_entries)}")
    print(f"corpus passages: {len(corpus)} (+{len(SHORT_STUBS)} short stubs)")
    print(f"questions expected in the variant matrix: {n_variants}")


if __name__ == "__main__":
    main()
