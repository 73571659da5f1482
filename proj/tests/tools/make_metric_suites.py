"""Writes the constructed extrinsic-metric suites.

MultiWoZ suite: 12 episodes with hand-assigned outcomes (I = inform, S = success).

  ep  goal                                    returned                  mentioned            outcome
  01  restaurant{food=indian,area=centre}     offered {r1}              phone                I S
  02  restaurant{food=indian}                 offered {r2}              phone postcode addr  I S
  03  restaurant{food=indian} req phone,pc    offered {r1}              phone                I -
  04  restaurant{food=chinese}                offered {r1}              phone                - -
  05  hotel{area=east,stars=3}                belief -> {h1}            phone                I S
  06  hotel{area=centre}                      belief -> {h3}            phone                - -
  07  hotel{stars=3} no requestables          offered {h1,h2}           -                    I S
  08  restaurant{indian} + hotel{centre}      {r1} / {h2}               phone (no postcode)  I -
  09  restaurant{food=italian}                nothing offered, no bel.  phone                - -
  10  restaurant{food=indian,area=dontcare}   offered {r1,r2}           - (needs address)    I -
  11  hotel{parking=yes}                      offered {h3}              phone                - -
  12  restaurant{food=thai} (no venue)        offered {r1}              phone                - -

  inform 7/12, success 4/12.
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[1] / "data"

db = {
    "restaurant": [
        {"id": "r1", "attributes": {"food": "indian", "area": "centre", "pricerange": "expensive"}},
        {"id": "r2", "attributes": {"food": "Indian ", "area": "north", "pricerange": "cheap"}},
        {"id": "r3", "attributes": {"food": "chinese", "area": "centre", "pricerange": "expensive"}},
        {"id": "r4", "attributes": {"food": "italian", "area": "south", "pricerange": "moderate"}},
    ],
    "hotel": [
        {"id": "h1", "attributes": {"area": "east", "stars": "3", "parking": "yes"}},
        {"id": "h2", "attributes": {"area": "centre", "stars": "3", "parking": "yes"}},
        {"id": "h3", "attributes": {"area": "north", "stars": "4", "parking": "no"}},
    ],
}


def goal(**domains):
    return {d: {"constraints": c, "requestables": sorted(r)} for d, (c, r) in domains.items()}


episodes = [
    ("ep01", goal(restaurant=({"food": "indian", "area": "centre"}, ["phone"])),
     {"offered_entity_ids": {"restaurant": ["r1"]}, "mentioned_slots": ["phone"]}),
    ("ep02", goal(restaurant=({"food": "indian"}, ["phone", "postcode"])),
     {"offered_entity_ids": {"restaurant": ["r2"]}, "mentioned_slots": ["phone", "postcode", "address"]}),
    ("ep03", goal(restaurant=({"food": "indian"}, ["phone", "postcode"])),
     {"offered_entity_ids": {"restaurant": ["r1"]}, "mentioned_slots": ["phone"]}),
    ("ep04", goal(restaurant=({"food": "chinese"}, ["phone"])),
     {"offered_entity_ids": {"restaurant": ["r1"]}, "mentioned_slots": ["phone"]}),
    ("ep05", goal(hotel=({"area": "east", "stars": "3"}, ["phone"])),
     {"final_constraints": {"hotel": {"area": "east", "stars": "3"}}, "mentioned_slots": ["phone"]}),
    ("ep06", goal(hotel=({"area": "centre"}, ["phone"])),
     {"final_constraints": {"hotel": {"area": "north"}}, "mentioned_slots": ["phone"]}),
    ("ep07", goal(hotel=({"stars": "3"}, [])),
     {"offered_entity_ids": {"hotel": ["h1", "h2"]}, "mentioned_slots": []}),
    ("ep08", goal(restaurant=({"food": "indian"}, ["phone"]), hotel=({"area": "centre"}, ["postcode"])),
     {"offered_entity_ids": {"restaurant": ["r1"], "hotel": ["h2"]}, "mentioned_slots": ["phone"]}),
    ("ep09", goal(restaurant=({"food": "italian"}, ["phone"])),
     {"mentioned_slots": ["phone"]}),
    ("ep10", goal(restaurant=({"food": "indian", "area": "dontcare"}, ["address"])),
     {"offered_entity_ids": {"restaurant": ["r1", "r2"]}, "mentioned_slots": []}),
    ("ep11", goal(hotel=({"parking": "yes"}, ["phone"])),
     {"offered_entity_ids": {"hotel": ["h3"]}, "mentioned_slots": ["phone"]}),
    ("ep12", goal(restaurant=({"food": "thai"}, ["phone"])),
     {"offered_entity_ids": {"restaurant": ["r1"]}, "mentioned_slots": ["phone"]}),
]

corpus = {"dialogs": []}
traces = []
for did, g, trace in episodes:
    corpus["dialogs"].append({
        "id": did,
        "domains": sorted(g),
        "exchanges": [{"user": f"constructed user turn for {did}", "belief": [], "system": f"constructed reply for {did}"}],
        "goal": g,
    })
    traces.append({"dialog_id": did, **trace})

out = ROOT / "multiwoz_suite"
(out / "db.json").write_text(json.dumps(db, indent=2) + "\n")
(out / "goals.json").write_text(json.dumps(corpus, indent=2) + "\n")
(out / "traces.jsonl").write_text("".join(json.dumps(t) + "\n" for t in traces))

# SGD hand cases: turn A matches fully, turn B gets area wrong.
golds = [
    {"dialog_id": "sgd-1", "turn_index": 0, "active_intent": "FindRestaurants",
     "requested_slots": ["phone", "postcode"], "slot_values": {"food": "indian"}},
    {"dialog_id": "sgd-1", "turn_index": 2, "active_intent": "FindRestaurants",
     "requested_slots": [], "slot_values": {"food": "indian", "area": "centre"}},
    {"dialog_id": "sgd-2", "turn_index": 0, "active_intent": "ReserveHotel",
     "requested_slots": [], "slot_values": {"stars": "3"}},
]
preds = [
    {"dialog_id": "sgd-1", "turn_index": 0, "active_intent": "FindRestaurants",
     "requested_slots": ["phone", "area"], "slot_values": {"food": "indian"}},
    {"dialog_id": "sgd-1", "turn_index": 2, "active_intent": "FindRestaurants",
     "requested_slots": [], "slot_values": {"food": "indian", "area": "north"}},
    {"dialog_id": "sgd-2", "turn_index": 0, "active_intent": "FindHotel",
     "requested_slots": [], "slot_values": {"stars": "3"}},
]
sgd = ROOT / "sgd_suite"
(sgd / "golds.jsonl").write_text("".join(json.dumps(g) + "\n" for g in golds))
(sgd / "predictions.jsonl").write_text("".join(json.dumps(p) + "\n" for p in preds))
print("wrote metric suites")
