function Counter(start) {
  var count = start;
  this.label = 'counter';
  this.increment = function() {
    count++;
    return count;
  };
}
Counter.prototype.describe = function() {
  return this.label;
};
