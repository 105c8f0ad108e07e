//! `<rrl-scene>`: one `<node>` per network node, attribute arcs as `<arc>`
//! children and complex-node members as ordered `<member>` children.

use std::collections::BTreeSet;

use super::{a, Ctx, IoError, XmlWriter, FORMAT_VERSION};
use crate::network::{Node, NodeId, NodeKind, TypedNetwork};

pub fn write_scene(net: &TypedNetwork) -> String {
    let mut w = XmlWriter::new();
    w.open("rrl-scene", &[("version", a(FORMAT_VERSION))]);
    for node in net.nodes() {
        let attrs = [
            ("id", a(&node.id)),
            ("kind", a(node.kind.as_str())),
            ("type", a(&node.type_label)),
            ("name", node.name.clone()),
        ];
        let members = node.members.as_deref().unwrap_or(&[]);
        let arcs: Vec<_> = net.attributes(&node.id).collect();
        if members.is_empty() && arcs.is_empty() {
            w.empty("node", &attrs);
            continue;
        }
        w.open("node", &attrs);
        for m in members {
            w.empty("member", &[("ref", a(m))]);
        }
        for (attr, to) in arcs {
            w.empty("arc", &[("attr", a(attr)), ("to", a(to))]);
        }
        w.close();
    }
    w.finish()
}

pub fn read_scene(text: &str) -> Result<TypedNetwork, IoError> {
    let doc = Ctx::parse(text)?;
    let cx = Ctx { doc: &doc };
    let root = cx.root("rrl-scene")?;
    let elements = cx.children(root)?;

    let mut declared = BTreeSet::new();
    for el in &elements {
        cx.expect(*el, "node")?;
        if !declared.insert(cx.attr(*el, "id")?) {
            return Err(cx.schema(*el, format!("node {} declared twice", cx.attr(*el, "id")?)));
        }
    }
    let resolve = |el: roxmltree::Node<'_, '_>, attr: &str| -> Result<NodeId, IoError> {
        let id = cx.attr(el, attr)?;
        if declared.contains(id) {
            Ok(NodeId::new(id))
        } else {
            Err(cx.schema(el, format!("reference to undeclared node {id}")))
        }
    };

    let mut net = TypedNetwork::new();
    let mut arcs = Vec::new();
    for el in &elements {
        let id = NodeId::new(cx.attr(*el, "id")?);
        let kind_raw = cx.attr(*el, "kind")?;
        let kind = NodeKind::parse(kind_raw).ok_or_else(|| cx.schema(*el, format!("unknown node kind {kind_raw}")))?;
        let name = el.attribute("name").map(str::to_string);
        let mut members = kind.is_complex().then(Vec::new);
        let mut seen_attrs = BTreeSet::new();
        for child in cx.children(*el)? {
            match child.tag_name().name() {
                "member" => match members.as_mut() {
                    Some(ms) => {
                        let m = resolve(child, "ref")?;
                        if kind == NodeKind::ComplexSet && ms.contains(&m) {
                            return Err(cx.schema(child, format!("set {id} lists {m} twice")));
                        }
                        ms.push(m);
                    }
                    None => return Err(cx.schema(child, format!("{kind} node {id} cannot have members"))),
                },
                "arc" => {
                    let attr = cx.attr(child, "attr")?;
                    if !seen_attrs.insert(attr) {
                        return Err(cx.schema(child, format!("node {id} has two values for {attr}")));
                    }
                    arcs.push((id.clone(), attr.to_string(), resolve(child, "to")?));
                }
                other => return Err(cx.schema(child, format!("unexpected <{other}> in <node>"))),
            }
        }
        net.insert_node(Node { id, kind, type_label: cx.attr(*el, "type")?.to_string(), name, members })
            .map_err(|e| cx.schema(*el, e.to_string()))?;
    }
    for (from, attr, to) in &arcs {
        net.set_attribute_unchecked(from, attr, to);
    }
    net.check_integrity().map_err(|e| cx.schema(root, e.to_string()))?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_network() {
        let text = write_scene(&TypedNetwork::new());
        assert_eq!(text, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<rrl-scene version=\"1\">\n</rrl-scene>\n");
        assert_eq!(read_scene(&text).unwrap(), TypedNetwork::new());
    }

    #[test]
    fn round_trip_preserves_ids_and_bytes() {
        let mut net = TypedNetwork::new();
        let x = net.variable("car");
        let hp = net.constant("quantity", "80hp & \"more\"");
        let set = net.set("termSet", vec![x.clone(), hp.clone()]).unwrap();
        net.set_attribute(&x, "value", &hp).unwrap();
        net.set_attribute(&set, "label", &x).unwrap();
        let text = write_scene(&net);
        let back = read_scene(&text).unwrap();
        assert_eq!(back, net);
        assert_eq!(write_scene(&back), text);
        // fresh ids continue after the loaded ones
        let mut back = back;
        assert_eq!(back.variable("t"), NodeId::new("v4"));
    }

    #[test]
    fn dangling_arc_is_schema_violation() {
        let text = "<rrl-scene version=\"1\">\n  <node id=\"v1\" kind=\"variable\" type=\"scene\">\n    <arc attr=\"history\" to=\"v99\"/>\n  </node>\n</rrl-scene>";
        let err = read_scene(text).unwrap_err();
        assert!(matches!(err, IoError::Schema { line: 3, column: 5, .. }), "{err}");
    }

    #[test]
    fn parse_error_has_position() {
        let err = read_scene("<rrl-scene version=\"1\">\n  <node id=\"v1\"\n</rrl-scene>").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 3, .. }), "{err}");
    }
}
