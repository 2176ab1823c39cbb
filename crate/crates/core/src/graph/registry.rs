use std::collections::BTreeMap;
use std::sync::Arc;

use super::generators::{ErdosRenyi, GraphGenerator, PreferentialAttachment, SmallWorld};
use super::weights::{NormalWeights, ParetoWeights, UniformWeights, WeightDistribution};
use crate::error::{Error, Result};

/// Name-keyed table of strategies. Iteration follows registration order so
/// "all" selections enumerate combinations deterministically.
#[derive(Debug)]
struct Table<T: ?Sized> {
    order: Vec<String>,
    entries: BTreeMap<String, Arc<T>>,
}

impl<T: ?Sized> Clone for Table<T> {
    fn clone(&self) -> Self {
        Self {
            order: self.order.clone(),
            entries: self.entries.clone(),
        }
    }
}

impl<T: ?Sized> Table<T> {
    fn new() -> Self {
        Self {
            order: Vec::new(),
            entries: BTreeMap::new(),
        }
    }

    fn insert(&mut self, name: &str, item: Arc<T>) {
        if self.entries.insert(name.to_string(), item).is_none() {
            self.order.push(name.to_string());
        }
    }

    fn get(&self, kind: &str, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown {kind} '{name}' (known: {})", self.order.join(", "))))
    }

    /// Resolves `all` or a single name.
    fn select(&self, kind: &str, name: &str) -> Result<Vec<(String, Arc<T>)>> {
        if name == "all" {
            Ok(self
                .order
                .iter()
                .map(|n| (n.clone(), self.entries[n].clone()))
                .collect())
        } else {
            Ok(vec![(name.to_string(), self.get(kind, name)?)])
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorRegistry {
    table: Table<dyn GraphGenerator>,
}

impl GeneratorRegistry {
    pub fn empty() -> Self {
        Self { table: Table::new() }
    }

    /// `ba`, `ws` and `er` with the default parameter ranges.
    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register(Arc::new(PreferentialAttachment::default()));
        reg.register(Arc::new(SmallWorld::default()));
        reg.register(Arc::new(ErdosRenyi::default()));
        reg
    }

    pub fn register(&mut self, generator: Arc<dyn GraphGenerator>) {
        let name = generator.name();
        self.table.insert(name, generator);
    }

    pub fn register_as(&mut self, name: &str, generator: Arc<dyn GraphGenerator>) {
        self.table.insert(name, generator);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn GraphGenerator>> {
        self.table.get("generator", name)
    }

    pub fn select(&self, name: &str) -> Result<Vec<(String, Arc<dyn GraphGenerator>)>> {
        self.table.select("generator", name)
    }

    pub fn names(&self) -> &[String] {
        &self.table.order
    }
}

#[derive(Debug, Clone)]
pub struct WeightRegistry {
    table: Table<dyn WeightDistribution>,
}

impl WeightRegistry {
    pub fn empty() -> Self {
        Self { table: Table::new() }
    }

    /// `normal`, `pareto` and `uniform` with the default parameters.
    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register(Arc::new(NormalWeights::standard()));
        reg.register(Arc::new(ParetoWeights::standard()));
        reg.register(Arc::new(UniformWeights::standard()));
        reg
    }

    pub fn register(&mut self, dist: Arc<dyn WeightDistribution>) {
        let name = dist.name();
        self.table.insert(name, dist);
    }

    pub fn register_as(&mut self, name: &str, dist: Arc<dyn WeightDistribution>) {
        self.table.insert(name, dist);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn WeightDistribution>> {
        self.table.get("weight distribution", name)
    }

    pub fn select(&self, name: &str) -> Result<Vec<(String, Arc<dyn WeightDistribution>)>> {
        self.table.select("weight distribution", name)
    }

    pub fn names(&self) -> &[String] {
        &self.table.order
    }
}
