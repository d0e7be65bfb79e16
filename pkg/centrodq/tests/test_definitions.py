import unittest

from centrodq import definitions
from centrodq.errors import InvalidArgumentError
from centrodq.grid import make_chebyshev
from centrodq.weights import weight_matrices


class TestSchemas(unittest.TestCase):

    def test_known_names(self):
        for name in ("grid", "weights", "frequencies", "conv-diff", "truncation", "bench", "error", "config",
                     "batch"):
            self.assertIs(definitions.get_schema(name), definitions.SCHEMAS[name])
        with self.assertRaises(InvalidArgumentError):
            definitions.get_schema("matrix")

    def test_weights_document(self):
        w = weight_matrices(make_chebyshev(6), 2)[-1]
        definitions.validate(w.to_repr(), "weights")

    def test_error_detail(self):
        with self.assertRaises(InvalidArgumentError) as ctx:
            definitions.validate({"kind": "uniform", "n": 1, "nodes": []}, "grid")
        self.assertEqual(ctx.exception.detail.split(":")[0], "n")
        with self.assertRaises(InvalidArgumentError) as ctx:
            definitions.validate([], "config")
        self.assertTrue(ctx.exception.detail.startswith("<root>"))

    def test_batch(self):
        definitions.validate({"cases": [{"command": "weights", "output": "w.json"}]}, "batch")
        for batch in ({"cases": []}, {"cases": [{"command": "weights"}]}, {}):
            with self.assertRaises(InvalidArgumentError):
                definitions.validate(batch, "batch")


class TestInferSchema(unittest.TestCase):

    def test_object(self):
        schema = definitions.infer_schema({"n": 8, "nodes": [0.0, 0.5], "kind": "uniform"})
        self.assertNotIn("$schema", schema)
        self.assertEqual(schema["properties"]["n"], {"type": "integer"})
        self.assertEqual(schema["properties"]["nodes"]["items"], {"type": "number"})
        self.assertEqual(sorted(schema["required"]), ["kind", "n", "nodes"])

    def test_scalars(self):
        self.assertEqual(definitions.infer_schema("abc"), {"type": "string"})
        self.assertEqual(definitions.infer_schema(None), {"type": "null"})

    def test_inferred_schema_accepts_its_sample(self):
        sample = {"rows": [{"op": "det", "ratio": 0.25}], "seed": 1}
        schema = definitions.infer_schema(sample)
        definitions.SCHEMAS["_sample"] = schema
        try:
            definitions.validate(sample, "_sample")
        finally:
            del definitions.SCHEMAS["_sample"]


if __name__ == '__main__':
    unittest.main()
