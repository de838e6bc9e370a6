using Xunit;

namespace Fixtures.Empty
{
    public class PlaceholderTests
    {
        [Fact]
        public void NotImplementedYet()
        {
        }
    }
}
