function Account(owner, balance) {
  this.owner = owner;
  this.balance = balance;
  this.history = [];
}
Account.prototype.deposit = function(amount) {
  this.balance += amount;
  this.history.push(['deposit', amount]);
};
Account.prototype.withdraw = function(amount) {
  if (amount > this.balance) {
    throw new Error('insufficient funds');
  }
  this.balance -= amount;
  this.history.push(['withdraw', amount]);
};
Account.prototype.getBalance = function() {
  return this.balance;
};
Account.prototype.getOwner = function() {
  return this.owner;
};
Account.prototype.count = function() {
  return this.history.length;
};
Account.prototype.last = function() {
  return this.history[this.history.length - 1];
};
Account.prototype.clear = function() {
  this.history = [];
};
Account.prototype.toString = function() {
  return this.owner + ': ' + this.balance;
};
function formatMoney(n) {
  return '$' + n.toFixed(2);
}
