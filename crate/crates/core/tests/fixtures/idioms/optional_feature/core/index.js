function Container() {
  this.children = [];
}
Container.prototype.addChild = function(child) {
  this.children.push(child);
  return child;
};
exports.Container = Container;
