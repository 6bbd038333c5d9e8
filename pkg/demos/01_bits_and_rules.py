"""Bit-level anatomy of a rule.

Builds the small five-feature layout used throughout the docs, encodes a
record, and walks through the rule algebra: coverage, OR-composition,
subsumption, and rendering.
"""

from rumix import (DatasetSchema, FeatureDescriptor, Rule, bits_from_string,
                   bits_to_string, compose, covers, encode_instance, render,
                   subsumes)

# five categorical features, two values each, plus a binary class
features = []
offset = 0
for name, domain in [
    ("F1", ("morning", "evening")),
    ("F2", ("clear", "cloudy")),
    ("F3", ("excellent", "poor")),
    ("F4", ("warm", "cool")),
    ("F5", ("medium", "high")),
]:
    features.append(FeatureDescriptor(name, "categorical", domain,
                                      offset, len(domain)))
    offset += len(domain)
schema = DatasetSchema(tuple(features), ("yes", "no"), offset + 2)
print(f"schema: {len(schema.features)} features, "
      f"{schema.n_classes} classes, {schema.total_width} bits total")

# a record becomes a bit vector with one set bit per segment
record = ["morning", "clear", "poor", "warm", "medium"]
inst = encode_instance(record, "yes", schema)
print(f"record {record} + class yes")
print(f"  encodes to {bits_to_string(inst.bits, schema)}")

# a rule segment with several set bits accepts any of those values
rule = Rule(bits_from_string("10 10 01 10 11 10"), class_index=0,
            fitness=0.0, seq=0)
print(f"rule    {bits_to_string(rule.bits, schema)}")
print(f"  reads: {render(rule, schema)}")
print(f"  covers the record: {covers(rule, inst, schema)}")

evening = encode_instance(["evening", "clear", "poor", "warm", "medium"],
                          "yes", schema)
print(f"  covers an evening record: {covers(rule, evening, schema)}")

# composition ORs two same-class rules into a more general one
other = Rule(bits_from_string("01 10 01 11 01 10"), 0, 0.0, 1)
merged = compose(rule, other, seq=2)
print(f"composing with {bits_to_string(other.bits, schema)}:")
print(f"  merged  {bits_to_string(merged.bits, schema)}")
print(f"  reads: {render(merged, schema)}")
print(f"  subsumes both parents: "
      f"{subsumes(merged, rule) and subsumes(merged, other)}")
